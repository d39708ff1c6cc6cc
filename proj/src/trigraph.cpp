#include "ktg/trigraph.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "ktg/faces_impl.hpp"

namespace ktg {

std::string LoopClass::to_string() const {
  std::string s = "O[";
  s += kind_char(kind);
  s += loop_orient_char(orient);
  if (!label.empty()) s += "@" + label;
  s += "]";
  return s;
}

int LabelTrigraph::loop_total() const {
  int n = 0;
  for (const auto& [cls, cnt] : loops) n += cnt;
  return n;
}

bool SignatureTable::has_type(VertexType t) const {
  return std::any_of(rows.begin(), rows.end(),
                     [t](const VertexSignature& r) { return r.type == t; });
}

bool SignatureTable::admits(VertexType t, const std::vector<EdgeKind>& kinds,
                            const std::vector<Dir>& dirs) const {
  for (const auto& row : rows) {
    if (row.type != t || row.kinds.size() != kinds.size()) continue;
    size_t k = kinds.size();
    for (size_t off = 0; off < k; ++off) {
      bool match = true;
      for (size_t i = 0; i < k && match; ++i)
        match = row.kinds[(i + off) % k] == kinds[i] && row.dirs[(i + off) % k] == dirs[i];
      if (match) return true;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Text format

namespace {

struct ArcTok {
  int arc;
  Dir dir;
  EdgeKind kind;
  std::string label;
};

ArcTok parse_arc_token(const std::string& tok, int lineno) {
  ArcTok t{0, Dir::Un, EdgeKind::Thick, ""};
  size_t i = 0;
  if (i < tok.size() && (tok[i] == '<' || tok[i] == '>')) {
    t.dir = tok[i] == '<' ? Dir::In : Dir::Out;
    ++i;
  }
  if (i >= tok.size() || !std::isdigit(static_cast<unsigned char>(tok[i])))
    throw ParseError("expected arc number in '" + tok + "'", lineno, 1);
  while (i < tok.size() && std::isdigit(static_cast<unsigned char>(tok[i])))
    t.arc = t.arc * 10 + (tok[i++] - '0');
  if (i < tok.size() && tok[i] == 'n') {
    t.kind = EdgeKind::Thin;
    ++i;
  }
  if (i < tok.size() && tok[i] == '@') {
    t.label = tok.substr(i + 1);
    if (t.label.empty()) throw ParseError("empty label in '" + tok + "'", lineno, 1);
    i = tok.size();
  }
  if (i != tok.size())
    throw ParseError("trailing characters in arc token '" + tok + "'", lineno, 1);
  return t;
}

LoopClass parse_loop_token(const std::string& body, int lineno) {
  LoopClass c;
  if (body.size() < 2) throw ParseError("loop is O[t+], O[t-], O[t.], O[n+], ...", lineno, 1);
  if (body[0] == 't')
    c.kind = EdgeKind::Thick;
  else if (body[0] == 'n')
    c.kind = EdgeKind::Thin;
  else
    throw ParseError("loop kind must be t or n", lineno, 1);
  switch (body[1]) {
    case '+': c.orient = LoopOrient::Pos; break;
    case '-': c.orient = LoopOrient::Neg; break;
    case '.': c.orient = LoopOrient::Un; break;
    default: throw ParseError("loop orientation must be +, - or .", lineno, 1);
  }
  if (body.size() > 2) {
    if (body[2] != '@') throw ParseError("unexpected loop decoration", lineno, 1);
    c.label = body.substr(3);
  }
  return c;
}

}  // namespace

LabelTrigraph parse_trigraph(const std::string& text) {
  LabelTrigraph g;
  std::map<int, std::vector<std::pair<DartId, ArcTok>>> arcs;
  std::istringstream is(text);
  std::string raw;
  int lineno = 0;
  auto handle_statement = [&](std::string s, int ln) {
    size_t b = s.find_first_not_of(" \t");
    size_t e = s.find_last_not_of(" \t");
    if (b == std::string::npos) return;
    s = s.substr(b, e - b + 1);
    auto lb = s.find('[');
    if (lb == std::string::npos || s.back() != ']')
      throw ParseError("expected NAME[...] in '" + s + "'", ln, 1);
    std::string name = s.substr(0, lb);
    std::string body = s.substr(lb + 1, s.size() - lb - 2);
    if (name == "O") {
      g.loops[parse_loop_token(body, ln)]++;
      return;
    }
    VertexType vt;
    if (!parse_vertex_type(name, vt))
      throw ParseError("unknown vertex type '" + name + "'", ln, 1);
    std::vector<std::string> toks;
    std::string cur;
    for (char ch : body) {
      if (ch == ',') {
        toks.push_back(cur);
        cur.clear();
      } else if (!std::isspace(static_cast<unsigned char>(ch))) {
        cur += ch;
      }
    }
    toks.push_back(cur);
    if (toks.size() != 3)
      throw ParseError("trigraph vertices are trivalent", ln, 1);
    NodeId nid = static_cast<NodeId>(g.nodes.size());
    g.nodes.push_back({vt, {}});
    for (size_t s2 = 0; s2 < toks.size(); ++s2) {
      ArcTok t = parse_arc_token(toks[s2], ln);
      DartId did = static_cast<DartId>(g.darts.size());
      g.darts.push_back({nid, static_cast<int>(s2), kNone, t.dir, t.kind, t.label});
      g.nodes[nid].darts.push_back(did);
      arcs[t.arc].push_back({did, t});
    }
  };
  while (std::getline(is, raw)) {
    ++lineno;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::string cur;
    for (char ch : raw) {
      if (ch == ';') {
        handle_statement(cur, lineno);
        cur.clear();
      } else {
        cur += ch;
      }
    }
    handle_statement(cur, lineno);
  }
  for (auto& [arc, uses] : arcs) {
    if (uses.size() != 2)
      throw ParseError("edge " + std::to_string(arc) + " appears " +
                       std::to_string(uses.size()) + " times (expected 2)");
    auto& [d1, t1] = uses[0];
    auto& [d2, t2] = uses[1];
    if (t1.kind != t2.kind)
      throw ParseError("edge " + std::to_string(arc) + " has conflicting kinds");
    bool oriented_ok = (t1.dir == Dir::Un && t2.dir == Dir::Un) ||
                       (t1.dir != Dir::Un && t2.dir == opposite(t1.dir));
    if (!oriented_ok)
      throw ParseError("edge " + std::to_string(arc) + " has inconsistent orientation marks");
    if (!t1.label.empty() && !t2.label.empty() && t1.label != t2.label)
      throw ParseError("edge " + std::to_string(arc) + " has conflicting labels");
    std::string label = !t1.label.empty() ? t1.label : t2.label;
    g.darts[d1].partner = d2;
    g.darts[d2].partner = d1;
    g.darts[d1].label = label;
    g.darts[d2].label = label;
  }
  return g;
}

std::string serialize_trigraph(const LabelTrigraph& g) {
  std::map<DartId, int> arc_of;
  int next_arc = 1;
  std::ostringstream os;
  bool first = true;
  for (const auto& nd : g.nodes) {
    if (!first) os << "; ";
    first = false;
    os << vertex_type_name(nd.type) << "[";
    for (size_t s = 0; s < nd.darts.size(); ++s) {
      const auto& dt = g.darts[nd.darts[s]];
      if (s) os << ",";
      bool first_use = !arc_of.count(nd.darts[s]);
      if (first_use) {
        arc_of[nd.darts[s]] = next_arc;
        arc_of[dt.partner] = next_arc;
        ++next_arc;
      }
      if (dt.dir != Dir::Un) os << dir_char(dt.dir);
      os << arc_of[nd.darts[s]];
      if (dt.kind == EdgeKind::Thin) os << "n";
      if (!dt.label.empty() && first_use) os << "@" << dt.label;
    }
    os << "]";
  }
  for (const auto& [cls, cnt] : g.loops)
    for (int i = 0; i < cnt; ++i) {
      if (!first) os << "; ";
      first = false;
      os << cls.to_string();
    }
  return os.str();
}

// ---------------------------------------------------------------------------
// Validation

ValidationReport validate_trigraph_structure(const LabelTrigraph& g) {
  ValidationReport r;
  auto add = [&r](const std::string& code, const std::string& msg, NodeId n = kNone,
                  DartId dt = kNone) { r.items.push_back({false, code, msg, n, dt}); };
  for (DartId i = 0; i < static_cast<DartId>(g.darts.size()); ++i) {
    DartId p = g.darts[i].partner;
    if (p == kNone || p == i || p < 0 || p >= static_cast<DartId>(g.darts.size()) ||
        g.darts[p].partner != i) {
      add("dart-involution", "partner is not a fixed-point-free involution", kNone, i);
      return r;
    }
    const auto& a = g.darts[i];
    const auto& b = g.darts[p];
    if (a.kind != b.kind) add("edge-kind", "edge darts disagree on kind", kNone, i);
    if (a.label != b.label) add("edge-label", "edge darts disagree on label", kNone, i);
    bool ok = (a.dir == Dir::Un && b.dir == Dir::Un) ||
              (a.dir != Dir::Un && b.dir == opposite(a.dir));
    if (!ok) add("edge-orientation", "oriented edge needs one outgoing and one incoming dart", kNone, i);
  }
  for (NodeId n = 0; n < static_cast<NodeId>(g.nodes.size()); ++n) {
    const auto& nd = g.nodes[n];
    if (nd.darts.size() != 3) add("arity", "trigraph vertices are trivalent", n);
    for (size_t s = 0; s < nd.darts.size(); ++s) {
      const auto& dt = g.darts[nd.darts[s]];
      if (dt.node != n || dt.slot != static_cast<int>(s))
        add("rotation", "dart slot bookkeeping broken", n, nd.darts[s]);
    }
  }
  return r;
}

ValidationReport validate_trigraph(const LabelTrigraph& g, const SignatureTable& sigs) {
  ValidationReport r = validate_trigraph_structure(g);
  if (!r.ok()) return r;
  for (NodeId n = 0; n < static_cast<NodeId>(g.nodes.size()); ++n) {
    const auto& nd = g.nodes[n];
    if (!sigs.has_type(nd.type)) {
      r.items.push_back({true, "sig-unknown-type",
                         "no signature for " + vertex_type_name(nd.type) +
                             " (table incomplete)", n, kNone});
      continue;
    }
    std::vector<EdgeKind> kinds;
    std::vector<Dir> dirs;
    for (DartId x : nd.darts) {
      kinds.push_back(g.darts[x].kind);
      dirs.push_back(g.darts[x].dir);
    }
    if (!sigs.admits(nd.type, kinds, dirs))
      r.items.push_back({false, "sig-mismatch",
                         "vertex decoration not admitted for " + vertex_type_name(nd.type),
                         n, kNone});
  }
  for (const auto& ce : euler_check(g))
    if (ce.genus != 0)
      r.items.push_back({false, "non-planar",
                         "non-planar embedding (genus " + std::to_string(ce.genus) + ")",
                         kNone, kNone});
  return r;
}

std::vector<std::vector<DartId>> faces(const LabelTrigraph& g) {
  auto out = detail::face_orbits(g);
  for (auto& f : out) std::rotate(f.begin(), std::min_element(f.begin(), f.end()), f.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<ComponentEuler> euler_check(const LabelTrigraph& g) {
  std::vector<int> comp;
  int nc = detail::node_components(g, comp);
  std::vector<ComponentEuler> out(static_cast<size_t>(nc));
  for (NodeId n = 0; n < static_cast<NodeId>(g.nodes.size()); ++n) out[comp[n]].vertices++;
  for (DartId i = 0; i < static_cast<DartId>(g.darts.size()); ++i)
    if (i < g.darts[i].partner) out[comp[g.darts[i].node]].edges++;
  for (const auto& f : detail::face_orbits(g)) out[comp[g.darts[f[0]].node]].faces++;
  for (auto& ce : out) ce.genus = (2 - (ce.vertices - ce.edges + ce.faces)) / 2;
  for (int i = 0; i < g.loop_total(); ++i) out.push_back({0, 0, 2, 0});
  return out;
}

}  // namespace ktg
