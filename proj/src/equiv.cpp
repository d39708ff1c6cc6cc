#include "ktg/equiv.hpp"

#include <deque>
#include <unordered_map>

namespace ktg {

namespace {

struct SearchNode {
  FormalSum sum;
  int parent = -1;
  RewriteStep step;  // step applied at parent to reach this node
  uint32_t depth = 0;
};

struct Side {
  std::vector<SearchNode> nodes;
  std::unordered_map<std::string, int> seen;  // signature -> node index
  std::deque<int> frontier;

  explicit Side(const FormalSum& start) {
    nodes.push_back({start, -1, {}, 0});
    seen[start.signature()] = 0;
    frontier.push_back(0);
  }
  std::vector<RewriteStep> path(int idx) const {
    std::vector<RewriteStep> out;
    for (int i = idx; i > 0; i = nodes[static_cast<size_t>(i)].parent)
      out.push_back(nodes[static_cast<size_t>(i)].step);
    std::reverse(out.begin(), out.end());
    return out;
  }
};

// Deterministic neighbor enumeration: keys ascending, rules by id, forward
// sites then backward terms/sites.
void for_each_neighbor(const FormalSum& s, const std::vector<RelationRule>& rules,
                       MirrorPolicy policy,
                       const std::function<bool(FormalSum&&, const RewriteStep&)>& emit) {
  for (const auto& [key, coeff] : s.terms()) {
    const LabelTrigraph& rep = s.representative(key);
    for (const auto& rule : rules) {
      auto sites = match_sites(rep, rule.lhs);
      for (size_t i = 0; i < sites.size(); ++i) {
        RewriteStep st{rule.id, key, RewriteDir::Forward, 0, static_cast<int>(i)};
        if (!emit(apply_rule(s, rule, key, sites[i], RewriteDir::Forward, 0, policy), st))
          return;
      }
      for (size_t t = 0; t < rule.rhs.size(); ++t) {
        Laurent q(s.ring());
        if (!coeff.try_divide(rule.rhs[t].first, q)) continue;
        auto bsites = match_sites(rep, rule.rhs[t].second);
        for (size_t i = 0; i < bsites.size(); ++i) {
          RewriteStep st{rule.id, key, RewriteDir::Backward, static_cast<int>(t),
                         static_cast<int>(i)};
          if (!emit(apply_rule(s, rule, key, bsites[i], RewriteDir::Backward,
                               static_cast<int>(t), policy),
                    st))
            return;
        }
      }
    }
  }
}

}  // namespace

bool verify_certificate(const FormalSum& a, const FormalSum& b, const RuleSet& rs,
                        const Certificate& cert) {
  try {
    FormalSum ma = a;
    for (const auto& st : cert.a_steps) ma = apply_step(ma, rs, st);
    FormalSum mb = b;
    for (const auto& st : cert.b_steps) mb = apply_step(mb, rs, st);
    return ma.signature() == mb.signature();
  } catch (const std::exception&) {
    return false;
  }
}

EquivResult equivalent(const FormalSum& a, const FormalSum& b, const RuleSet& rs,
                       const EquivBudget& budget) {
  if (!(*a.ring() == *b.ring())) throw RingMismatch("equivalent: ring mismatch");
  EquivResult res;
  if (a.signature() == b.signature()) {
    res.outcome = EquivOutcome::Equal;
    res.explored = 2;
    return res;
  }

  auto rules = active_relations(rs);
  Side sa(a), sb(b);
  res.explored = 2;

  // Meet check against the other side; returns certificate when both legs
  // verify by replay.
  auto try_finish = [&](Side& own, int own_idx, Side& other,
                        const std::string& sig) -> bool {
    auto it = other.seen.find(sig);
    if (it == other.seen.end()) return false;
    Certificate cert;
    bool own_is_a = &own == &sa;
    auto own_path = own.path(own_idx);
    auto other_path = other.path(it->second);
    cert.a_steps = own_is_a ? own_path : other_path;
    cert.b_steps = own_is_a ? other_path : own_path;
    if (!verify_certificate(a, b, rs, cert)) return false;
    res.outcome = EquivOutcome::Equal;
    res.cert = std::move(cert);
    return true;
  };

  bool exhausted = false;
  while (!exhausted && (!sa.frontier.empty() || !sb.frontier.empty())) {
    // Alternate strictly, expanding one full layer step (one node) at a time
    // from the side with the smaller frontier; ties go to a.
    Side& own = (sb.frontier.empty() ||
                 (!sa.frontier.empty() && sa.frontier.size() <= sb.frontier.size()))
                    ? sa
                    : sb;
    Side& other = &own == &sa ? sb : sa;
    int idx = own.frontier.front();
    own.frontier.pop_front();
    const SearchNode& node = own.nodes[static_cast<size_t>(idx)];
    if (node.depth >= budget.max_depth) {
      exhausted = true;
      break;
    }
    FormalSum base = node.sum;
    uint32_t depth = node.depth;
    bool done = false;
    for_each_neighbor(base, rules, rs.mirror,
                      [&](FormalSum&& nb, const RewriteStep& st) -> bool {
                        std::string sig = nb.signature();
                        if (own.seen.count(sig)) return true;
                        if (res.explored >= budget.max_explored) {
                          exhausted = true;
                          return false;
                        }
                        int nid = static_cast<int>(own.nodes.size());
                        own.nodes.push_back({std::move(nb), idx, st, depth + 1});
                        own.seen[sig] = nid;
                        own.frontier.push_back(nid);
                        ++res.explored;
                        if (try_finish(own, nid, other, sig)) {
                          done = true;
                          return false;
                        }
                        return true;
                      });
    if (done) return res;
  }
  res.outcome = EquivOutcome::Unknown;
  res.budget_exhausted = exhausted;
  return res;
}

}  // namespace ktg
