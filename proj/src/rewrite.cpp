#include "ktg/rewrite.hpp"

#include <algorithm>
#include <sstream>

#include "fusion.hpp"

namespace ktg {

// ---------------------------------------------------------------------------
// FormalSum

void FormalSum::add(const Laurent& c, const LabelTrigraph& g, MirrorPolicy policy) {
  if (c.is_zero()) return;
  auto canon = canonical_form(g, policy);
  add_canonical(c, canon.key, canon.graph);
}

void FormalSum::add_canonical(const Laurent& c, const std::string& key,
                              const LabelTrigraph& canon_rep) {
  if (c.is_zero()) return;
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    terms_.emplace(key, c);
    reps_.emplace(key, canon_rep);
  } else {
    it->second = it->second + c;
    if (it->second.is_zero()) {
      terms_.erase(it);
      reps_.erase(key);
    }
  }
}

FormalSum FormalSum::operator+(const FormalSum& o) const {
  if (!(*ring_ == *o.ring_)) throw RingMismatch("formal sum ring mismatch");
  FormalSum r = *this;
  for (const auto& [k, c] : o.terms_) r.add_canonical(c, k, o.reps_.at(k));
  return r;
}

FormalSum FormalSum::scaled(const Laurent& c) const {
  FormalSum r(ring_);
  if (c.is_zero()) return r;
  for (const auto& [k, v] : terms_) r.add_canonical(v * c, k, reps_.at(k));
  return r;
}

bool FormalSum::operator==(const FormalSum& o) const {
  return *ring_ == *o.ring_ && terms_ == o.terms_;
}

FormalSum FormalSum::disjoint_product(const FormalSum& o, MirrorPolicy policy) const {
  if (!(*ring_ == *o.ring_)) throw RingMismatch("formal sum ring mismatch");
  FormalSum r(ring_);
  for (const auto& [ka, ca] : terms_) {
    const LabelTrigraph& ga = reps_.at(ka);
    for (const auto& [kb, cb] : o.terms_) {
      const LabelTrigraph& gb = o.reps_.at(kb);
      LabelTrigraph u = ga;
      int nbase = static_cast<int>(u.nodes.size());
      int dbase = static_cast<int>(u.darts.size());
      for (const auto& nd : gb.nodes) {
        TriNode copy = nd;
        for (auto& d : copy.darts) d += dbase;
        u.nodes.push_back(std::move(copy));
      }
      for (const auto& dt : gb.darts) {
        TriDart copy = dt;
        copy.node += nbase;
        copy.partner += dbase;
        u.darts.push_back(std::move(copy));
      }
      for (const auto& [cls, cnt] : gb.loops) u.loops[cls] += cnt;
      r.add(ca * cb, u, policy);
    }
  }
  return r;
}

const LabelTrigraph& FormalSum::representative(const std::string& key) const {
  return reps_.at(key);
}

const Laurent& FormalSum::coefficient(const std::string& key) const {
  return terms_.at(key);
}

std::string FormalSum::signature() const {
  std::ostringstream os;
  for (const auto& [k, c] : terms_) os << k << "=" << c.to_string() << "&";
  return os.str();
}

std::string FormalSum::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    const LabelTrigraph& rep = reps_.at(k);
    os << "(" << c.to_string() << ") * ["
       << (rep.empty() ? "empty" : serialize_trigraph(rep)) << "]";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Surgery

namespace {

std::string resolve_label(const LabelSpec& spec, const std::map<std::string, std::string>& b) {
  switch (spec.kind) {
    case LabelSpec::None: return "";
    case LabelSpec::Token: return spec.text;
    case LabelSpec::Var: {
      auto it = b.find(spec.text);
      if (it == b.end())
        throw RuleError("unbound label variable @" + spec.text + " in rhs fragment");
      return it->second;
    }
  }
  return "";
}

}  // namespace

LabelTrigraph glue(const LabelTrigraph& host, const Fragment& lhs, const Match& site,
                   const Fragment& rhs) {
  if (lhs.interface() != rhs.interface())
    throw RuleError("interface gluing failure: lhs/rhs leg mismatch");

  // Removed host nodes = images of lhs real nodes.
  std::vector<char> node_removed(host.nodes.size(), 0);
  for (NodeId fn = 0; fn < static_cast<NodeId>(lhs.nodes.size()); ++fn) {
    if (lhs.nodes[fn].leg > 0) continue;
    DartId fd = lhs.nodes[fn].darts[0];
    node_removed[host.darts[site.dart_image[fd]].node] = 1;
  }
  std::vector<char> dart_removed(host.darts.size(), 0);
  for (DartId hd = 0; hd < static_cast<DartId>(host.darts.size()); ++hd)
    if (node_removed[host.darts[hd].node]) dart_removed[hd] = 1;

  // Host edges consumed by the match (their partner relation is void).
  std::vector<char> edge_consumed(host.darts.size(), 0);
  for (DartId fd = 0; fd < static_cast<DartId>(lhs.darts.size()); ++fd) {
    edge_consumed[site.dart_image[fd]] = 1;
    edge_consumed[host.darts[site.dart_image[fd]].partner] = 1;
  }

  LabelTrigraph out;
  std::vector<NodeId> new_node(host.nodes.size(), kNone);
  std::vector<DartId> new_dart(host.darts.size(), kNone);
  for (NodeId n = 0; n < static_cast<NodeId>(host.nodes.size()); ++n) {
    if (node_removed[n]) continue;
    new_node[n] = static_cast<NodeId>(out.nodes.size());
    out.nodes.push_back({host.nodes[n].type, {}});
  }
  for (DartId d = 0; d < static_cast<DartId>(host.darts.size()); ++d) {
    if (dart_removed[d]) continue;
    new_dart[d] = static_cast<DartId>(out.darts.size());
    const auto& src = host.darts[d];
    out.darts.push_back({new_node[src.node], src.slot, kNone, src.dir, src.kind, src.label});
  }
  for (NodeId n = 0; n < static_cast<NodeId>(host.nodes.size()); ++n) {
    if (node_removed[n]) continue;
    for (DartId d : host.nodes[n].darts) out.nodes[new_node[n]].darts.push_back(new_dart[d]);
  }
  // Unconsumed surviving edges keep their pairing.
  for (DartId d = 0; d < static_cast<DartId>(host.darts.size()); ++d) {
    if (dart_removed[d] || edge_consumed[d]) continue;
    out.darts[new_dart[d]].partner = new_dart[host.darts[d].partner];
  }

  // Host loops minus matched instances.
  out.loops = host.loops;
  for (const auto& [cls, inst] : site.loop_image) {
    auto it = out.loops.find(cls);
    if (it == out.loops.end() || it->second <= 0)
      throw RuleError("interface gluing failure: matched loop missing");
    if (--it->second == 0) out.loops.erase(it);
  }

  // Instantiate rhs real nodes and darts.
  std::vector<NodeId> rhs_node(rhs.nodes.size(), kNone);
  std::vector<DartId> rhs_dart(rhs.darts.size(), kNone);
  for (NodeId n = 0; n < static_cast<NodeId>(rhs.nodes.size()); ++n) {
    if (rhs.nodes[n].leg > 0) continue;
    rhs_node[n] = static_cast<NodeId>(out.nodes.size());
    out.nodes.push_back({rhs.nodes[n].type, {}});
  }
  for (DartId d = 0; d < static_cast<DartId>(rhs.darts.size()); ++d) {
    const auto& src = rhs.darts[d];
    if (rhs.nodes[src.node].leg > 0) continue;
    rhs_dart[d] = static_cast<DartId>(out.darts.size());
    out.darts.push_back({rhs_node[src.node], src.slot, kNone, src.dir, src.kind, ""});
    out.nodes[rhs_node[src.node]].darts.push_back(rhs_dart[d]);
  }
  // Internal rhs edges.
  for (DartId d = 0; d < static_cast<DartId>(rhs.darts.size()); ++d) {
    DartId p = rhs.darts[d].partner;
    if (d >= p) continue;
    if (rhs_dart[d] == kNone || rhs_dart[p] == kNone) continue;
    out.darts[rhs_dart[d]].partner = rhs_dart[p];
    out.darts[rhs_dart[p]].partner = rhs_dart[d];
    std::string lbl = resolve_label(rhs.darts[d].label, site.bindings);
    out.darts[rhs_dart[d]].label = lbl;
    out.darts[rhs_dart[p]].label = lbl;
  }

  // Chain fusion across the interface.
  detail::Fuser fuser;
  size_t k = lhs.legs.size();
  std::vector<int> hostside(k), rhsside(k);
  std::map<DartId, int> term_socket;  // new dart id -> socket
  auto terminal_socket = [&](DartId nd) {
    auto it = term_socket.find(nd);
    if (it != term_socket.end()) return it->second;
    int s = fuser.new_socket(nd);
    term_socket[nd] = s;
    return s;
  };
  for (size_t i = 0; i < k; ++i) {
    hostside[i] = fuser.new_socket();
    rhsside[i] = fuser.new_socket();
    fuser.add_link(hostside[i], rhsside[i]);
  }
  // Host-side attachments.
  for (size_t i = 0; i < k; ++i) {
    DartId far = site.dart_image[lhs.legs[i]];
    if (!dart_removed[far]) {
      const auto& h = host.darts[far];
      fuser.add_piece({terminal_socket(new_dart[far]), hostside[i], h.kind, h.dir != Dir::Un,
                       false, ""});
      continue;
    }
    // Doubly-cut edge: find the leg whose internal end maps to `far`.
    bool found = false;
    for (size_t j = 0; j < k && !found; ++j) {
      DartId p = lhs.darts[lhs.legs[j]].partner;
      if (lhs.nodes[lhs.darts[p].node].leg > 0) continue;
      if (site.dart_image[p] != far) continue;
      found = true;
      if (i < j) {
        const auto& h = host.darts[far];
        fuser.add_piece({hostside[i], hostside[j], h.kind, h.dir != Dir::Un,
                         !h.label.empty(), h.label});
      }
    }
    if (!found) throw RuleError("interface gluing failure: unmatched cut edge");
  }
  // Rhs-side attachments.
  for (size_t i = 0; i < k; ++i) {
    DartId l = rhs.legs[i];
    DartId p = rhs.darts[l].partner;
    std::string lbl = resolve_label(rhs.darts[l].label, site.bindings);
    if (rhs.nodes[rhs.darts[p].node].leg > 0) {
      size_t j = static_cast<size_t>(rhs.nodes[rhs.darts[p].node].leg - 1);
      if (i < j)
        fuser.add_piece({rhsside[i], rhsside[j], rhs.darts[l].kind,
                         rhs.darts[l].dir != Dir::Un, !lbl.empty(), lbl});
    } else {
      fuser.add_piece({rhsside[i], terminal_socket(rhs_dart[p]), rhs.darts[l].kind,
                       rhs.darts[l].dir != Dir::Un, !lbl.empty(), lbl});
    }
  }

  auto fused = fuser.run();
  for (const auto& bond : fused.bonds) {
    auto& a = out.darts[bond.term_a];
    auto& b = out.darts[bond.term_b];
    if (a.kind != bond.kind || b.kind != bond.kind)
      throw RuleError("interface gluing failure: edge kind clash at bond");
    bool ok = (a.dir == Dir::Un && b.dir == Dir::Un) ||
              (a.dir != Dir::Un && b.dir == opposite(a.dir));
    if (!ok) throw RuleError("interface gluing failure: orientation clash at bond");
    a.partner = bond.term_b;
    b.partner = bond.term_a;
    a.label = bond.label;
    b.label = bond.label;
  }
  for (const auto& cls : fused.loops) out.loops[cls]++;

  // Rhs free loops.
  for (const auto& loop : rhs.loops) {
    LoopClass cls{loop.kind, loop.orient, resolve_label(loop.label, site.bindings)};
    out.loops[cls]++;
  }

  // Slot bookkeeping.
  for (NodeId n = 0; n < static_cast<NodeId>(out.nodes.size()); ++n)
    for (size_t s = 0; s < out.nodes[n].darts.size(); ++s) {
      out.darts[out.nodes[n].darts[s]].node = n;
      out.darts[out.nodes[n].darts[s]].slot = static_cast<int>(s);
    }
  return out;
}

// ---------------------------------------------------------------------------
// Rule application

std::vector<RelationRule> active_relations(const RuleSet& rs) {
  std::vector<RelationRule> out;
  for (const auto& r : rs.relations)
    if (!r.todo) out.push_back(r);
  for (size_t i = 0; i < rs.scalars.size(); ++i) out.push_back(rs.scalar_as_relation(i));
  std::sort(out.begin(), out.end(),
            [](const RelationRule& a, const RelationRule& b) { return a.id < b.id; });
  return out;
}

FormalSum apply_rule(const FormalSum& s, const RelationRule& rule, const std::string& key,
                     const Match& site, RewriteDir dir, int backward_term,
                     MirrorPolicy policy) {
  const Laurent& c = s.coefficient(key);
  const LabelTrigraph& rep = s.representative(key);
  FormalSum r = s;
  r.add_canonical(-c, key, rep);
  if (dir == RewriteDir::Forward) {
    for (const auto& [ci, fi] : rule.rhs) r.add(c * ci, glue(rep, rule.lhs, site, fi), policy);
  } else {
    if (backward_term < 0 || backward_term >= static_cast<int>(rule.rhs.size()))
      throw RuleError("backward term out of range");
    const auto& [ck, fk] = rule.rhs[static_cast<size_t>(backward_term)];
    Laurent q(s.ring());
    if (!c.try_divide(ck, q))
      throw NonInvertible("backward application needs exact division by " + ck.to_string());
    r.add(q, glue(rep, fk, site, rule.lhs), policy);
    for (size_t i = 0; i < rule.rhs.size(); ++i) {
      if (static_cast<int>(i) == backward_term) continue;
      r.add(-(q * rule.rhs[i].first), glue(rep, fk, site, rule.rhs[i].second), policy);
    }
  }
  return r;
}

FormalSum apply_step(const FormalSum& s, const RuleSet& rs, const RewriteStep& step) {
  auto rules = active_relations(rs);
  auto it = std::find_if(rules.begin(), rules.end(),
                         [&](const RelationRule& r) { return r.id == step.rule_id; });
  if (it == rules.end()) throw RuleError("unknown rule in step: " + step.rule_id);
  const Fragment& pat =
      step.dir == RewriteDir::Forward ? it->lhs : it->rhs[static_cast<size_t>(step.term)].second;
  auto sites = match_sites(s.representative(step.key), pat);
  if (step.site < 0 || step.site >= static_cast<int>(sites.size()))
    throw RuleError("site index out of range in step replay");
  return apply_rule(s, *it, step.key, sites[static_cast<size_t>(step.site)], step.dir,
                    step.term, rs.mirror);
}

NormalizeResult normalize(const FormalSum& s, const RuleSet& rs, uint64_t budget) {
  std::vector<RelationRule> rules;
  for (const auto& r : active_relations(rs))
    if (r.hint == RuleHint::LeftToRight) rules.push_back(r);

  NormalizeResult res{s, false, 0};
  while (res.steps < budget) {
    bool applied = false;
    for (const auto& [key, coeff] : res.sum.terms()) {
      const LabelTrigraph& rep = res.sum.representative(key);
      for (const auto& rule : rules) {
        auto sites = match_sites(rep, rule.lhs);
        if (sites.empty()) continue;
        res.sum = apply_rule(res.sum, rule, key, sites[0], RewriteDir::Forward, 0, rs.mirror);
        ++res.steps;
        applied = true;
        break;
      }
      if (applied) break;
    }
    if (!applied) {
      res.fixpoint = true;
      break;
    }
  }
  return res;
}

}  // namespace ktg
