#include <algorithm>
#include <sstream>
#include <vector>

#include "ktg/diagram.hpp"

namespace ktg {

// Same rooted-traversal scheme as trigraph canonicalization; decorations are
// node kind, the crossing's under-in slot marker and the dart direction.
std::string diagram_canonical_key(const GraphDiagram& g) {
  int nd = static_cast<int>(g.darts.size());
  std::vector<DartId> partner(nd), nxt(nd);
  std::vector<std::string> deco(nd);
  for (DartId i = 0; i < nd; ++i) {
    partner[i] = g.darts[i].partner;
    nxt[i] = g.next(i);
    const auto& n = g.nodes[g.darts[i].node];
    char k = n.kind == DiagNodeKind::Crossing ? 'X'
             : n.kind == DiagNodeKind::Source ? 'S'
                                              : 'T';
    deco[i] = std::string(1, k) +
              (n.kind == DiagNodeKind::Crossing && g.darts[i].slot == 0 ? "u" : "") +
              dir_char(g.darts[i].dir);
  }

  std::vector<int> comp(nd, -1);
  std::vector<std::vector<DartId>> members;
  for (DartId s = 0; s < nd; ++s) {
    if (comp[s] >= 0) continue;
    int c = static_cast<int>(members.size());
    members.emplace_back();
    std::vector<DartId> stack{s};
    comp[s] = c;
    while (!stack.empty()) {
      DartId d = stack.back();
      stack.pop_back();
      members[c].push_back(d);
      for (DartId e : {partner[d], nxt[d]})
        if (comp[e] < 0) {
          comp[e] = c;
          stack.push_back(e);
        }
    }
    std::sort(members[c].begin(), members[c].end());
  }

  std::vector<int> num(nd, -1);
  std::vector<DartId> order;
  auto run = [&](DartId root) {
    order.clear();
    std::fill(num.begin(), num.end(), -1);
    auto visit = [&](DartId d) {
      if (num[d] < 0) {
        num[d] = static_cast<int>(order.size());
        order.push_back(d);
      }
    };
    visit(root);
    for (size_t i = 0; i < order.size(); ++i) {
      visit(partner[order[i]]);
      visit(nxt[order[i]]);
    }
    std::ostringstream os;
    for (DartId d : order) os << num[partner[d]] << "," << num[nxt[d]] << "," << deco[d] << ";";
    return os.str();
  };

  std::vector<std::string> keys;
  for (const auto& m : members) {
    std::string best;
    for (DartId root : m) {
      std::string s = run(root);
      if (best.empty() || s < best) best = s;
    }
    keys.push_back(std::move(best));
  }
  std::sort(keys.begin(), keys.end());
  std::ostringstream os;
  for (const auto& k : keys) os << "{" << k << "}";
  os << "O+x" << g.loops_pos << "|O-x" << g.loops_neg;
  return os.str();
}

}  // namespace ktg
