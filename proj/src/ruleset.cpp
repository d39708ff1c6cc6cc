#include "ktg/ruleset.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace ktg {

int Fragment::real_node_count() const {
  int n = 0;
  for (const auto& nd : nodes)
    if (nd.leg == 0) ++n;
  return n;
}

std::vector<std::pair<EdgeKind, Dir>> Fragment::interface() const {
  std::vector<std::pair<EdgeKind, Dir>> out;
  for (DartId l : legs) out.push_back({darts[l].kind, darts[l].dir});
  return out;
}

std::optional<std::string> RuleSet::first_incomplete() const {
  for (const auto& s : smoothing)
    if (s.todo) return s.id;
  for (const auto& r : relations)
    if (r.todo) return r.id;
  return std::nullopt;
}

const SmoothingRule* RuleSet::smoothing_for(CrossClass c) const {
  for (const auto& s : smoothing)
    if (s.applies_to == c) return &s;
  for (const auto& s : smoothing)
    if (s.applies_to == CrossClass::Any) return &s;
  return nullptr;
}

RelationRule RuleSet::scalar_as_relation(size_t i) const {
  const ScalarRule& s = scalars[i];
  RelationRule r;
  r.id = s.id;
  r.hint = RuleHint::LeftToRight;
  r.lhs = s.lhs;
  r.rhs.push_back({s.value, Fragment{}});
  return r;
}

// ---------------------------------------------------------------------------
// Fragment text

namespace {

struct FragTok {
  int arc;
  Dir dir;
  EdgeKind kind;
  LabelSpec label;
};

LabelSpec make_label(const std::string& name, const std::vector<std::string>& vars) {
  if (name.empty()) return {};
  if (std::find(vars.begin(), vars.end(), name) != vars.end())
    return {LabelSpec::Var, name};
  return {LabelSpec::Token, name};
}

FragTok parse_frag_arc(const std::string& tok, const std::vector<std::string>& vars) {
  FragTok t{0, Dir::Un, EdgeKind::Thick, {}};
  size_t i = 0;
  if (i < tok.size() && (tok[i] == '<' || tok[i] == '>')) {
    t.dir = tok[i] == '<' ? Dir::In : Dir::Out;
    ++i;
  }
  if (i >= tok.size() || !std::isdigit(static_cast<unsigned char>(tok[i])))
    throw ParseError("expected arc number in '" + tok + "'");
  while (i < tok.size() && std::isdigit(static_cast<unsigned char>(tok[i])))
    t.arc = t.arc * 10 + (tok[i++] - '0');
  if (i < tok.size() && tok[i] == 'n') {
    t.kind = EdgeKind::Thin;
    ++i;
  }
  if (i < tok.size() && tok[i] == '@') {
    t.label = make_label(tok.substr(i + 1), vars);
    if (t.label.text.empty()) throw ParseError("empty label in '" + tok + "'");
    i = tok.size();
  }
  if (i != tok.size()) throw ParseError("trailing characters in arc token '" + tok + "'");
  return t;
}

std::vector<std::string> split_args(const std::string& body) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : body) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(ch))) {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

Fragment parse_fragment(const std::string& text, const std::vector<std::string>& vars) {
  Fragment f;
  std::map<int, std::vector<std::pair<DartId, FragTok>>> arcs;
  std::map<int, DartId> leg_seen;

  std::string stmt;
  std::vector<std::string> stmts;
  for (char ch : text) {
    if (ch == ';') {
      stmts.push_back(stmt);
      stmt.clear();
    } else {
      stmt += ch;
    }
  }
  stmts.push_back(stmt);

  for (std::string s : stmts) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) continue;
    size_t e = s.find_last_not_of(" \t\r\n");
    s = s.substr(b, e - b + 1);
    auto lb = s.find('[');
    if (lb == std::string::npos || s.back() != ']')
      throw ParseError("expected NAME[...] in fragment, got '" + s + "'");
    std::string name = s.substr(0, lb);
    std::string body = s.substr(lb + 1, s.size() - lb - 2);
    if (name == "O") {
      FragLoop loop;
      if (body.size() < 2) throw ParseError("loop is O[t+] etc.");
      loop.kind = body[0] == 'n' ? EdgeKind::Thin : EdgeKind::Thick;
      if (body[0] != 't' && body[0] != 'n') throw ParseError("loop kind must be t or n");
      switch (body[1]) {
        case '+': loop.orient = LoopOrient::Pos; break;
        case '-': loop.orient = LoopOrient::Neg; break;
        case '.': loop.orient = LoopOrient::Un; break;
        default: throw ParseError("loop orientation must be +, - or .");
      }
      if (body.size() > 2) {
        if (body[2] != '@') throw ParseError("unexpected loop decoration");
        loop.label = make_label(body.substr(3), vars);
      }
      f.loops.push_back(loop);
      continue;
    }
    if (name == "L") {
      auto args = split_args(body);
      if (args.size() != 2) throw ParseError("leg is L[index,arc]");
      int idx = std::stoi(args[0]);
      if (idx <= 0) throw ParseError("leg indices are 1-based");
      if (leg_seen.count(idx)) throw ParseError("duplicate leg L[" + args[0] + "]");
      FragTok t = parse_frag_arc(args[1], vars);
      NodeId nid = static_cast<NodeId>(f.nodes.size());
      f.nodes.push_back({idx, VertexType::V9, {}});
      DartId did = static_cast<DartId>(f.darts.size());
      f.darts.push_back({nid, 0, kNone, t.dir, t.kind, t.label});
      f.nodes[nid].darts.push_back(did);
      leg_seen[idx] = did;
      arcs[t.arc].push_back({did, t});
      continue;
    }
    VertexType vt;
    if (!parse_vertex_type(name, vt))
      throw ParseError("unknown vertex type '" + name + "'");
    auto args = split_args(body);
    if (args.size() != 3) throw ParseError("trigraph vertices are trivalent");
    NodeId nid = static_cast<NodeId>(f.nodes.size());
    f.nodes.push_back({0, vt, {}});
    for (size_t s2 = 0; s2 < args.size(); ++s2) {
      FragTok t = parse_frag_arc(args[s2], vars);
      DartId did = static_cast<DartId>(f.darts.size());
      f.darts.push_back({nid, static_cast<int>(s2), kNone, t.dir, t.kind, t.label});
      f.nodes[nid].darts.push_back(did);
      arcs[t.arc].push_back({did, t});
    }
  }

  for (auto& [arc, uses] : arcs) {
    if (uses.size() != 2)
      throw ParseError("fragment edge " + std::to_string(arc) + " appears " +
                       std::to_string(uses.size()) + " times (expected 2)");
    auto& [d1, t1] = uses[0];
    auto& [d2, t2] = uses[1];
    if (t1.kind != t2.kind)
      throw ParseError("fragment edge " + std::to_string(arc) + " has conflicting kinds");
    bool ok = (t1.dir == Dir::Un && t2.dir == Dir::Un) ||
              (t1.dir != Dir::Un && t2.dir == opposite(t1.dir));
    if (!ok)
      throw ParseError("fragment edge " + std::to_string(arc) + " has inconsistent orientation");
    if (t1.label.kind != LabelSpec::None && t2.label.kind != LabelSpec::None &&
        !(t1.label == t2.label))
      throw ParseError("fragment edge " + std::to_string(arc) + " has conflicting labels");
    LabelSpec label = t1.label.kind != LabelSpec::None ? t1.label : t2.label;
    f.darts[d1].partner = d2;
    f.darts[d2].partner = d1;
    f.darts[d1].label = label;
    f.darts[d2].label = label;
  }

  if (!leg_seen.empty()) {
    int expect = 1;
    for (const auto& [idx, dart] : leg_seen) {
      if (idx != expect)
        throw ParseError("leg indices must be dense from 1 (missing L[" +
                         std::to_string(expect) + "])");
      f.legs.push_back(dart);
      ++expect;
    }
  }
  return f;
}

std::string serialize_fragment(const Fragment& f) {
  // Arc numbers in order of first appearance in the emitted text, so that
  // serialize∘parse is stable.
  std::map<DartId, int> arc_of;
  int next_arc = 1;
  auto arc_tok = [&](DartId d, bool with_label) {
    const auto& dt = f.darts[d];
    bool first_use = !arc_of.count(d);
    if (first_use) {
      arc_of[d] = next_arc;
      arc_of[dt.partner] = next_arc;
      ++next_arc;
    }
    std::string s;
    if (dt.dir != Dir::Un) s += dir_char(dt.dir);
    s += std::to_string(arc_of[d]);
    if (dt.kind == EdgeKind::Thin) s += "n";
    if (with_label && dt.label.kind != LabelSpec::None && first_use)
      s += "@" + dt.label.text;
    return s;
  };
  std::ostringstream os;
  bool first = true;
  auto sep = [&]() {
    if (!first) os << "; ";
    first = false;
  };
  for (NodeId n = 0; n < static_cast<NodeId>(f.nodes.size()); ++n) {
    const auto& nd = f.nodes[n];
    if (nd.leg > 0) continue;
    sep();
    os << vertex_type_name(nd.type) << "[";
    for (size_t s = 0; s < nd.darts.size(); ++s)
      os << (s ? "," : "") << arc_tok(nd.darts[s], true);
    os << "]";
  }
  for (size_t i = 0; i < f.legs.size(); ++i) {
    sep();
    os << "L[" << (i + 1) << "," << arc_tok(f.legs[i], true) << "]";
  }
  for (const auto& loop : f.loops) {
    sep();
    os << "O[" << kind_char(loop.kind) << loop_orient_char(loop.orient);
    if (loop.label.kind != LabelSpec::None) os << "@" << loop.label.text;
    os << "]";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Ruleset DSL

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// Splits "COEFF * { FRAG } + COEFF * { FRAG }" at depth-0 " + ".
std::vector<std::string> split_terms(const std::string& s, int lineno) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (size_t i = 0; i < s.size(); ++i) {
    char ch = s[i];
    if (ch == '{' || ch == '(') ++depth;
    if (ch == '}' || ch == ')') --depth;
    if (depth == 0 && ch == '+' && i > 0 && s[i - 1] == ' ' && i + 1 < s.size() &&
        s[i + 1] == ' ') {
      out.push_back(cur);
      cur.clear();
      continue;
    }
    cur += ch;
  }
  out.push_back(cur);
  for (auto& t : out)
    if (trim(t).empty()) throw ParseError("empty term in rule body", lineno, 1);
  return out;
}

std::pair<Laurent, Fragment> parse_term(const std::string& term, RingPtr ring,
                                        const std::vector<std::string>& vars, int lineno) {
  auto lb = term.find('{');
  auto rb = term.rfind('}');
  if (lb == std::string::npos || rb == std::string::npos || rb < lb)
    throw ParseError("expected COEFF * { FRAGMENT }", lineno, 1);
  std::string coeff_text = trim(term.substr(0, lb));
  if (!coeff_text.empty() && coeff_text.back() == '*') coeff_text.pop_back();
  coeff_text = trim(coeff_text);
  if (coeff_text.size() >= 2 && coeff_text.front() == '(' && coeff_text.back() == ')')
    coeff_text = coeff_text.substr(1, coeff_text.size() - 2);
  if (coeff_text.empty()) coeff_text = "1";
  Laurent c = Laurent::parse(coeff_text, ring);
  Fragment f = parse_fragment(term.substr(lb + 1, rb - lb - 1), vars);
  return {std::move(c), std::move(f)};
}

EdgeKind parse_kind_word(const std::string& w, int lineno) {
  if (w == "thick") return EdgeKind::Thick;
  if (w == "thin") return EdgeKind::Thin;
  throw ParseError("expected 'thick' or 'thin', got '" + w + "'", lineno, 1);
}

Dir parse_dir_word(const std::string& w, int lineno) {
  if (w == "in") return Dir::In;
  if (w == "out") return Dir::Out;
  if (w == "un") return Dir::Un;
  throw ParseError("expected 'in', 'out' or 'un', got '" + w + "'", lineno, 1);
}

// "R4.1(@l) lr" -> id, vars, hint
void parse_rule_head(std::string head, int lineno, std::string& id,
                     std::vector<std::string>& vars, RuleHint& hint) {
  hint = RuleHint::Both;
  head = trim(head);
  if (head.size() > 3 && head.substr(head.size() - 3) == " lr") {
    hint = RuleHint::LeftToRight;
    head = trim(head.substr(0, head.size() - 3));
  }
  auto lp = head.find('(');
  if (lp != std::string::npos) {
    if (head.back() != ')') throw ParseError("malformed rule variable list", lineno, 1);
    for (auto& v : split_args(head.substr(lp + 1, head.size() - lp - 2))) {
      if (v.empty() || v[0] != '@')
        throw ParseError("rule variables are written @name", lineno, 1);
      vars.push_back(v.substr(1));
    }
    head = trim(head.substr(0, lp));
  }
  if (head.empty()) throw ParseError("missing rule id", lineno, 1);
  id = head;
}

void check_interfaces(const RelationRule& r) {
  if (r.todo) return;
  auto want = r.lhs.interface();
  for (const auto& [c, f] : r.rhs)
    if (f.interface() != want)
      throw ParseError("interface mismatch in rule " + r.id);
}

}  // namespace

RuleSet parse_ruleset(const std::string& text) {
  RuleSet rs;
  std::vector<std::string> ring_vars;
  std::vector<std::pair<int, std::string>> lines;
  {
    std::istringstream is(text);
    std::string raw;
    int n = 0;
    while (std::getline(is, raw)) {
      ++n;
      auto hash = raw.find('#');
      if (hash != std::string::npos) raw.erase(hash);
      std::string t = trim(raw);
      if (!t.empty()) lines.push_back({n, t});
    }
  }

  rs.ring = make_ring({});
  bool ring_set = false;
  size_t i = 0;
  int scalar_count = 0;

  auto word = [](const std::string& s, size_t& pos) {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    size_t start = pos;
    while (pos < s.size() && !std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    return s.substr(start, pos - start);
  };

  while (i < lines.size()) {
    auto [lineno, line] = lines[i];
    size_t pos = 0;
    std::string kw = word(line, pos);
    std::string rest = trim(line.substr(pos));

    if (kw == "ruleset") {
      rs.name = rest;
      ++i;
    } else if (kw == "ring") {
      if (ring_set) throw ParseError("duplicate ring declaration", lineno, 1);
      ring_set = true;
      std::istringstream vs(rest);
      std::string v;
      while (vs >> v) ring_vars.push_back(v);
      rs.ring = make_ring(ring_vars);
      ++i;
    } else if (kw == "strands") {
      if (rest == "oriented")
        rs.strands_oriented = true;
      else if (rest == "unoriented")
        rs.strands_oriented = false;
      else
        throw ParseError("strands oriented|unoriented", lineno, 1);
      ++i;
    } else if (kw == "option") {
      size_t p2 = 0;
      std::string name = word(rest, p2);
      std::string val = trim(rest.substr(p2));
      if (name == "mirror_quotient")
        rs.mirror = (val == "on") ? MirrorPolicy::MirrorQuotient : MirrorPolicy::Oriented;
      else
        throw ParseError("unknown option '" + name + "'", lineno, 1);
      ++i;
    } else if (kw == "vertexmap") {
      size_t p2 = 0;
      std::string which = word(rest, p2);
      std::string tname = trim(rest.substr(p2));
      VertexType vt;
      if (!parse_vertex_type(tname, vt))
        throw ParseError("unknown vertex type '" + tname + "'", lineno, 1);
      if (which == "source")
        rs.map_source = vt;
      else if (which == "sink")
        rs.map_sink = vt;
      else
        throw ParseError("vertexmap source|sink V.k", lineno, 1);
      ++i;
    } else if (kw == "vertexsig") {
      std::istringstream ws(rest);
      std::string tname;
      ws >> tname;
      VertexType vt;
      if (!parse_vertex_type(tname, vt))
        throw ParseError("unknown vertex type '" + tname + "'", lineno, 1);
      std::vector<std::string> toks;
      std::string t;
      while (ws >> t) toks.push_back(t);
      if (toks.size() != 6)
        throw ParseError("vertexsig takes 3 kinds then 3 directions", lineno, 1);
      VertexSignature sig;
      sig.type = vt;
      for (int k = 0; k < 3; ++k) sig.kinds.push_back(parse_kind_word(toks[k], lineno));
      for (int k = 3; k < 6; ++k) sig.dirs.push_back(parse_dir_word(toks[k], lineno));
      rs.sigs.rows.push_back(std::move(sig));
      ++i;
    } else if (kw == "smooth") {
      auto colon = rest.find(':');
      if (colon == std::string::npos) throw ParseError("smooth ID CLASS: ...", lineno, 1);
      std::string head = trim(rest.substr(0, colon));
      std::string body = trim(rest.substr(colon + 1));
      size_t p2 = 0;
      std::string id = word(head, p2);
      std::string cls_and_vars = trim(head.substr(p2));
      SmoothingRule sm;
      std::string cls = cls_and_vars;
      auto lp = cls_and_vars.find('(');
      if (lp != std::string::npos) {
        RuleHint ignored;
        std::string combined_id;
        parse_rule_head(id + " " + cls_and_vars, lineno, combined_id, sm.label_vars, ignored);
        cls = trim(cls_and_vars.substr(0, lp));
      }
      sm.id = id;
      if (cls == "pos")
        sm.applies_to = CrossClass::Pos;
      else if (cls == "neg")
        sm.applies_to = CrossClass::Neg;
      else if (cls == "any")
        sm.applies_to = CrossClass::Any;
      else
        throw ParseError("smoothing class is pos|neg|any", lineno, 1);
      if (body == "TODO") {
        sm.todo = true;
      } else {
        for (const auto& term : split_terms(body, lineno))
          sm.choices.push_back(parse_term(term, rs.ring, sm.label_vars, lineno));
        if (sm.choices.size() != 2)
          throw ParseError("smoothing rule " + sm.id + " needs exactly two choices", lineno, 1);
        for (const auto& [c, f] : sm.choices)
          if (f.legs.size() != 4)
            throw ParseError("smoothing fragments have 4 legs (rule " + sm.id + ")", lineno, 1);
        if (sm.choices[0].second.interface() != sm.choices[1].second.interface())
          throw ParseError("interface mismatch in rule " + sm.id, lineno, 1);
      }
      rs.smoothing.push_back(std::move(sm));
      ++i;
    } else if (kw == "rule") {
      auto colon = rest.find(':');
      if (colon == std::string::npos) throw ParseError("rule ID: ...", lineno, 1);
      RelationRule r;
      parse_rule_head(rest.substr(0, colon), lineno, r.id, r.label_vars, r.hint);
      std::string inline_body = trim(rest.substr(colon + 1));
      ++i;
      if (inline_body == "TODO") {
        r.todo = true;
      } else if (!inline_body.empty()) {
        throw ParseError("rule body starts on the following lhs:/rhs: lines", lineno, 1);
      } else {
        bool have_lhs = false, have_rhs = false;
        while (i < lines.size()) {
          auto [ln2, l2] = lines[i];
          if (l2.rfind("lhs:", 0) == 0) {
            std::string b = trim(l2.substr(4));
            if (b == "TODO") {
              r.todo = true;
            } else {
              auto lb = b.find('{');
              auto rb = b.rfind('}');
              if (lb == std::string::npos || rb == std::string::npos)
                throw ParseError("lhs: { FRAGMENT }", ln2, 1);
              r.lhs = parse_fragment(b.substr(lb + 1, rb - lb - 1), r.label_vars);
            }
            have_lhs = true;
            ++i;
          } else if (l2.rfind("rhs:", 0) == 0) {
            std::string b = trim(l2.substr(4));
            if (b == "TODO") {
              r.todo = true;
            } else {
              for (const auto& term : split_terms(b, ln2))
                r.rhs.push_back(parse_term(term, rs.ring, r.label_vars, ln2));
            }
            have_rhs = true;
            ++i;
          } else {
            break;
          }
        }
        if (!have_lhs || !have_rhs)
          throw ParseError("empty rule body for rule " + r.id, lineno, 1);
        check_interfaces(r);
      }
      rs.relations.push_back(std::move(r));
    } else if (kw == "scalar") {
      auto arrow = rest.find("->");
      if (arrow == std::string::npos) throw ParseError("scalar { FRAGMENT } -> COEFF", lineno, 1);
      std::string frag_text = trim(rest.substr(0, arrow));
      std::string coeff_text = trim(rest.substr(arrow + 2));
      auto lb = frag_text.find('{');
      auto rb = frag_text.rfind('}');
      if (lb == std::string::npos || rb == std::string::npos)
        throw ParseError("scalar { FRAGMENT } -> COEFF", lineno, 1);
      ScalarRule sc;
      sc.id = "scalar:" + std::to_string(++scalar_count);
      sc.lhs = parse_fragment(frag_text.substr(lb + 1, rb - lb - 1), {});
      if (!sc.lhs.legs.empty())
        throw ParseError("scalar fragments are closed (no legs)", lineno, 1);
      sc.value = Laurent::parse(coeff_text, rs.ring);
      rs.scalars.push_back(std::move(sc));
      ++i;
    } else {
      throw ParseError("unknown directive '" + kw + "'", lineno, 1);
    }
  }

  // Rule ids unique; fragment vertex types must appear in the signature table.
  {
    std::vector<std::string> ids;
    for (const auto& s : rs.smoothing) ids.push_back(s.id);
    for (const auto& r : rs.relations) ids.push_back(r.id);
    auto sorted = ids;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw ParseError("duplicate rule id");
    auto check_types = [&rs](const Fragment& f, const std::string& id) {
      for (const auto& nd : f.nodes)
        if (nd.leg == 0 && !rs.sigs.has_type(nd.type))
          throw ParseError("vertex type " + vertex_type_name(nd.type) + " used in rule " +
                           id + " missing from signature table");
    };
    for (const auto& s : rs.smoothing)
      for (const auto& [c, f] : s.choices) check_types(f, s.id);
    for (const auto& r : rs.relations) {
      if (r.todo) continue;
      check_types(r.lhs, r.id);
      for (const auto& [c, f] : r.rhs) check_types(f, r.id);
    }
    for (const auto& s : rs.scalars) check_types(s.lhs, s.id);
    for (auto m : {rs.map_source, rs.map_sink})
      if (m && !rs.sigs.has_type(*m))
        throw ParseError("vertexmap target " + vertex_type_name(*m) +
                         " missing from signature table");
  }
  return rs;
}

RuleSet load_ruleset(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open ruleset file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_ruleset(ss.str());
}

std::string serialize_ruleset(const RuleSet& rs) {
  std::ostringstream os;
  os << "ruleset " << rs.name << "\n";
  os << "ring";
  for (const auto& v : rs.ring->vars) os << " " << v;
  os << "\n";
  os << "strands " << (rs.strands_oriented ? "oriented" : "unoriented") << "\n";
  if (rs.mirror == MirrorPolicy::MirrorQuotient) os << "option mirror_quotient on\n";
  if (rs.map_source) os << "vertexmap source " << vertex_type_name(*rs.map_source) << "\n";
  if (rs.map_sink) os << "vertexmap sink " << vertex_type_name(*rs.map_sink) << "\n";
  auto kind_word = [](EdgeKind k) { return k == EdgeKind::Thick ? "thick" : "thin"; };
  auto dir_word = [](Dir d) {
    return d == Dir::In ? "in" : d == Dir::Out ? "out" : "un";
  };
  for (const auto& sig : rs.sigs.rows) {
    os << "vertexsig " << vertex_type_name(sig.type);
    for (auto k : sig.kinds) os << " " << kind_word(k);
    for (auto d : sig.dirs) os << " " << dir_word(d);
    os << "\n";
  }
  auto vars_text = [](const std::vector<std::string>& vars) {
    if (vars.empty()) return std::string();
    std::string s = "(";
    for (size_t i = 0; i < vars.size(); ++i) s += (i ? ",@" : "@") + vars[i];
    return s + ")";
  };
  auto term_text = [](const std::pair<Laurent, Fragment>& t) {
    std::string c = t.first.to_string();
    bool simple = c.find(' ') == std::string::npos;
    return (simple ? c : "(" + c + ")") + " * { " + serialize_fragment(t.second) + " }";
  };
  for (const auto& s : rs.smoothing) {
    os << "smooth " << s.id << " "
       << (s.applies_to == CrossClass::Pos   ? "pos"
           : s.applies_to == CrossClass::Neg ? "neg"
                                             : "any")
       << vars_text(s.label_vars) << ": ";
    if (s.todo) {
      os << "TODO\n";
    } else {
      os << term_text(s.choices[0]) << " + " << term_text(s.choices[1]) << "\n";
    }
  }
  for (const auto& r : rs.relations) {
    os << "rule " << r.id << vars_text(r.label_vars)
       << (r.hint == RuleHint::LeftToRight ? " lr" : "") << ":";
    if (r.todo) {
      os << " TODO\n";
      continue;
    }
    os << "\n  lhs: { " << serialize_fragment(r.lhs) << " }\n  rhs: ";
    for (size_t i = 0; i < r.rhs.size(); ++i) os << (i ? " + " : "") << term_text(r.rhs[i]);
    os << "\n";
  }
  for (const auto& s : rs.scalars)
    os << "scalar { " << serialize_fragment(s.lhs) << " } -> " << s.value.to_string() << "\n";
  return os.str();
}

}  // namespace ktg
