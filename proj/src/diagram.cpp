#include "ktg/diagram.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "ktg/faces_impl.hpp"

namespace ktg {

int GraphDiagram::crossing_count() const {
  int n = 0;
  for (const auto& nd : nodes)
    if (nd.kind == DiagNodeKind::Crossing) ++n;
  return n;
}

bool GraphDiagram::crossing_positive(NodeId n) const {
  return darts[nodes[n].darts[3]].dir == Dir::In;
}

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (const auto& v : items) {
    os << (v.warning ? "warning" : "violation") << " [" << v.code << "] " << v.message;
    if (v.node != kNone) os << " (node " << v.node << ")";
    if (v.dart != kNone) os << " (dart " << v.dart << ")";
    os << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct ArcRef {
  NodeId node;
  int slot;
  Dir explicit_dir;  // Un when unmarked
};

struct Line {
  int lineno;
  std::string kind;           // "X", "V+", "V-", "O"
  std::vector<std::string> args;
};

std::vector<Line> tokenize(const std::string& text) {
  std::vector<Line> out;
  std::istringstream is(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(is, raw)) {
    ++lineno;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    size_t i = 0;
    while (i < raw.size() && std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
    size_t j = raw.size();
    while (j > i && std::isspace(static_cast<unsigned char>(raw[j - 1]))) --j;
    if (i >= j) continue;
    std::string s = raw.substr(i, j - i);
    auto lb = s.find('[');
    if (lb == std::string::npos || s.back() != ']')
      throw ParseError("expected NAME[...] node line, got '" + s + "'", lineno, 1);
    Line ln;
    ln.lineno = lineno;
    ln.kind = s.substr(0, lb);
    std::string body = s.substr(lb + 1, s.size() - lb - 2);
    std::string cur;
    for (char ch : body) {
      if (ch == ',') {
        ln.args.push_back(cur);
        cur.clear();
      } else if (!std::isspace(static_cast<unsigned char>(ch))) {
        cur += ch;
      }
    }
    ln.args.push_back(cur);
    out.push_back(std::move(ln));
  }
  return out;
}

void parse_arc_token(const std::string& tok, int lineno, int& arc, Dir& dir) {
  size_t i = 0;
  dir = Dir::Un;
  if (i < tok.size() && (tok[i] == '<' || tok[i] == '>')) {
    dir = tok[i] == '<' ? Dir::In : Dir::Out;
    ++i;
  }
  if (i >= tok.size() || !std::isdigit(static_cast<unsigned char>(tok[i])))
    throw ParseError("expected arc number in '" + tok + "'", lineno, 1);
  arc = 0;
  while (i < tok.size() && std::isdigit(static_cast<unsigned char>(tok[i])))
    arc = arc * 10 + (tok[i++] - '0');
  if (i != tok.size())
    throw ParseError("trailing characters in arc token '" + tok + "'", lineno, 1);
  if (arc <= 0) throw ParseError("arc numbers are positive", lineno, 1);
}

// Orientation constraint solver: darts carry a parity relative to a class
// representative; fixed assignments propagate through classes.
struct OrientSolver {
  std::vector<int> parent, rank_;
  std::vector<char> parity;          // parity to parent
  std::vector<int> fixed;            // -1 unknown, 0 Out, 1 In (for roots)
  explicit OrientSolver(int n) : parent(n), rank_(n, 0), parity(n, 0), fixed(n, -1) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  std::pair<int, char> find(int x) {
    if (parent[x] == x) return {x, 0};
    auto [r, p] = find(parent[x]);
    parent[x] = r;
    parity[x] = static_cast<char>(parity[x] ^ p);
    return {r, parity[x]};
  }
  bool relate(int a, int b, char opposite) {
    auto [ra, pa] = find(a);
    auto [rb, pb] = find(b);
    char rel = static_cast<char>(pa ^ pb ^ opposite);
    if (ra == rb) return rel == 0;
    if (fixed[ra] >= 0 && fixed[rb] >= 0 && fixed[ra] != (fixed[rb] ^ rel)) return false;
    if (rank_[ra] < rank_[rb]) {
      std::swap(ra, rb);
    }
    parent[rb] = ra;
    parity[rb] = rel;
    if (fixed[rb] >= 0 && fixed[ra] < 0) fixed[ra] = fixed[rb] ^ rel;
    if (rank_[ra] == rank_[rb]) ++rank_[ra];
    return true;
  }
  bool assign(int a, int value) {
    auto [r, p] = find(a);
    int want = value ^ p;
    if (fixed[r] >= 0) return fixed[r] == want;
    fixed[r] = want;
    return true;
  }
  int value(int a) {
    auto [r, p] = find(a);
    if (fixed[r] < 0) return -1;
    return fixed[r] ^ p;
  }
};

}  // namespace

GraphDiagram parse_diagram(const std::string& text) {
  auto lines = tokenize(text);
  GraphDiagram d;
  std::map<int, std::vector<std::pair<DartId, int>>> arc_uses;  // arc -> (dart, lineno)
  std::vector<Dir> explicit_dirs;

  for (const auto& ln : lines) {
    if (ln.kind == "O") {
      if (ln.args.size() != 1 || (ln.args[0] != "+" && ln.args[0] != "-"))
        throw ParseError("free loop is O[+] or O[-]", ln.lineno, 1);
      (ln.args[0] == "+" ? d.loops_pos : d.loops_neg)++;
      continue;
    }
    DiagNodeKind kind;
    size_t arity;
    if (ln.kind == "X") {
      kind = DiagNodeKind::Crossing;
      arity = 4;
    } else if (ln.kind == "V+") {
      kind = DiagNodeKind::Source;
      arity = 3;
    } else if (ln.kind == "V-") {
      kind = DiagNodeKind::Sink;
      arity = 3;
    } else {
      throw ParseError("unknown node kind '" + ln.kind + "'", ln.lineno, 1);
    }
    if (ln.args.size() != arity)
      throw ParseError(ln.kind + " takes " + std::to_string(arity) + " arcs", ln.lineno, 1);
    NodeId nid = static_cast<NodeId>(d.nodes.size());
    d.nodes.push_back({kind, {}});
    for (size_t s = 0; s < arity; ++s) {
      int arc;
      Dir dir;
      parse_arc_token(ln.args[s], ln.lineno, arc, dir);
      DartId did = static_cast<DartId>(d.darts.size());
      d.darts.push_back({nid, static_cast<int>(s), kNone, Dir::Un});
      d.nodes[nid].darts.push_back(did);
      explicit_dirs.push_back(dir);
      arc_uses[arc].push_back({did, ln.lineno});
    }
  }

  for (const auto& [arc, uses] : arc_uses) {
    if (uses.size() != 2)
      throw ParseError("arc " + std::to_string(arc) + " appears " +
                           std::to_string(uses.size()) + " times (expected 2)",
                       uses[0].second, 1);
    d.darts[uses[0].first].partner = uses[1].first;
    d.darts[uses[1].first].partner = uses[0].first;
  }

  // Orientation inference. 0 = Out, 1 = In. Edge opposition and explicit
  // marks are hard constraints; node rules are defaults so that files
  // breaking a node invariant still parse and fail validation instead.
  OrientSolver os(static_cast<int>(d.darts.size()));
  auto fail = [](int lineno) {
    throw ParseError("orientation inconsistency", lineno, 1);
  };
  for (DartId i = 0; i < static_cast<DartId>(d.darts.size()); ++i) {
    if (!os.relate(i, d.darts[i].partner, 1)) fail(0);
    if (explicit_dirs[i] != Dir::Un)
      if (!os.assign(i, explicit_dirs[i] == Dir::In ? 1 : 0)) fail(0);
  }
  for (NodeId n = 0; n < static_cast<NodeId>(d.nodes.size()); ++n) {
    const auto& nd = d.nodes[n];
    switch (nd.kind) {
      case DiagNodeKind::Source:
        for (DartId x : nd.darts) os.assign(x, 0);
        break;
      case DiagNodeKind::Sink:
        for (DartId x : nd.darts) os.assign(x, 1);
        break;
      case DiagNodeKind::Crossing:
        os.assign(nd.darts[0], 1);
        os.assign(nd.darts[2], 0);
        os.relate(nd.darts[1], nd.darts[3], 1);
        break;
    }
  }
  // Unforced components: lowest dart id outgoing.
  for (DartId i = 0; i < static_cast<DartId>(d.darts.size()); ++i)
    if (os.value(i) < 0) os.assign(i, 0);
  for (DartId i = 0; i < static_cast<DartId>(d.darts.size()); ++i)
    d.darts[i].dir = os.value(i) == 1 ? Dir::In : Dir::Out;
  return d;
}

GraphDiagram load_diagram(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open diagram file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_diagram(ss.str());
}

std::string serialize_diagram(const GraphDiagram& d) {
  // Arc numbers in order of first appearance in the emitted text.
  std::map<DartId, int> arc_of;
  int next_arc = 1;
  std::ostringstream os;
  for (const auto& nd : d.nodes) {
    switch (nd.kind) {
      case DiagNodeKind::Crossing: os << "X["; break;
      case DiagNodeKind::Source: os << "V+["; break;
      case DiagNodeKind::Sink: os << "V-["; break;
    }
    for (size_t s = 0; s < nd.darts.size(); ++s) {
      DartId x = nd.darts[s];
      if (!arc_of.count(x)) {
        arc_of[x] = next_arc;
        arc_of[d.darts[x].partner] = next_arc;
        ++next_arc;
      }
      os << (s ? "," : "") << arc_of[x];
    }
    os << "]\n";
  }
  for (int i = 0; i < d.loops_pos; ++i) os << "O[+]\n";
  for (int i = 0; i < d.loops_neg; ++i) os << "O[-]\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Validation and Euler checks

ValidationReport validate_diagram(const GraphDiagram& d) {
  ValidationReport r;
  auto add = [&r](const std::string& code, const std::string& msg, NodeId n = kNone,
                  DartId dt = kNone) { r.items.push_back({false, code, msg, n, dt}); };

  for (DartId i = 0; i < static_cast<DartId>(d.darts.size()); ++i) {
    DartId p = d.darts[i].partner;
    if (p == kNone || p == i || p < 0 || p >= static_cast<DartId>(d.darts.size()) ||
        d.darts[p].partner != i) {
      add("dart-involution", "partner is not a fixed-point-free involution", kNone, i);
      return r;
    }
    if (d.darts[i].dir == Dir::Un || d.darts[i].dir != opposite(d.darts[p].dir))
      add("edge-orientation", "edge darts must be oriented oppositely", kNone, i);
  }
  for (NodeId n = 0; n < static_cast<NodeId>(d.nodes.size()); ++n) {
    const auto& nd = d.nodes[n];
    size_t want = nd.kind == DiagNodeKind::Crossing ? 4u : 3u;
    if (nd.darts.size() != want) {
      add("arity", "node has wrong arity", n);
      continue;
    }
    for (size_t s = 0; s < nd.darts.size(); ++s) {
      const auto& dt = d.darts[nd.darts[s]];
      if (dt.node != n || dt.slot != static_cast<int>(s))
        add("rotation", "dart slot bookkeeping broken", n, nd.darts[s]);
    }
    switch (nd.kind) {
      case DiagNodeKind::Source:
      case DiagNodeKind::Sink: {
        Dir want_dir = nd.kind == DiagNodeKind::Source ? Dir::Out : Dir::In;
        for (DartId x : nd.darts)
          if (d.darts[x].dir != want_dir) {
            add("mixed-orientation", "mixed orientation at vertex", n, x);
            break;
          }
        break;
      }
      case DiagNodeKind::Crossing: {
        int in = 0;
        for (DartId x : nd.darts)
          if (d.darts[x].dir == Dir::In) ++in;
        if (in != 2) add("crossing-io", "crossing needs two incoming and two outgoing darts", n);
        if (d.darts[nd.darts[0]].dir != Dir::In || d.darts[nd.darts[2]].dir != Dir::Out ||
            d.darts[nd.darts[1]].dir == d.darts[nd.darts[3]].dir)
          add("crossing-strand", "crossing strands must pass through (in opposite out)", n);
        break;
      }
    }
  }
  if (!r.items.empty()) return r;
  for (const auto& ce : euler_check(d))
    if (ce.genus != 0)
      add("non-planar", "non-planar embedding (genus " + std::to_string(ce.genus) + ")");
  return r;
}

std::vector<std::vector<DartId>> faces(const GraphDiagram& d) {
  auto out = detail::face_orbits(d);
  for (auto& f : out) std::rotate(f.begin(), std::min_element(f.begin(), f.end()), f.end());
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

template <typename G>
std::vector<ComponentEuler> euler_impl(const G& g, int free_loops) {
  std::vector<int> comp;
  int nc = detail::node_components(g, comp);
  std::vector<ComponentEuler> out(static_cast<size_t>(nc));
  for (NodeId n = 0; n < static_cast<NodeId>(g.nodes.size()); ++n)
    out[comp[n]].vertices++;
  for (DartId i = 0; i < static_cast<DartId>(g.darts.size()); ++i)
    if (i < g.darts[i].partner) out[comp[g.darts[i].node]].edges++;
  for (const auto& f : detail::face_orbits(g))
    out[comp[g.darts[f[0]].node]].faces++;
  for (auto& ce : out) ce.genus = (2 - (ce.vertices - ce.edges + ce.faces)) / 2;
  for (int i = 0; i < free_loops; ++i) out.push_back({0, 0, 2, 0});
  return out;
}

}  // namespace

std::vector<ComponentEuler> euler_check(const GraphDiagram& d) {
  return euler_impl(d, d.loops_pos + d.loops_neg);
}

}  // namespace ktg
