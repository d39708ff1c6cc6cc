#pragma once

#include <algorithm>
#include <vector>

#include "ktg/types.hpp"

namespace ktg::detail {

// Orbits of next∘partner over any map type exposing next(d) and darts[d].partner.
template <typename G>
std::vector<std::vector<DartId>> face_orbits(const G& g) {
  int n = static_cast<int>(g.darts.size());
  std::vector<char> seen(n, 0);
  std::vector<std::vector<DartId>> out;
  for (DartId start = 0; start < n; ++start) {
    if (seen[start]) continue;
    std::vector<DartId> orbit;
    DartId d = start;
    do {
      seen[d] = 1;
      orbit.push_back(d);
      d = g.next(g.darts[d].partner);
    } while (d != start);
    out.push_back(std::move(orbit));
  }
  return out;
}

// Connected components over <partner, next>; returns node -> component index.
template <typename G>
int node_components(const G& g, std::vector<int>& comp) {
  comp.assign(g.nodes.size(), -1);
  int nc = 0;
  for (NodeId s = 0; s < static_cast<NodeId>(g.nodes.size()); ++s) {
    if (comp[s] >= 0) continue;
    std::vector<NodeId> stack{s};
    comp[s] = nc;
    while (!stack.empty()) {
      NodeId u = stack.back();
      stack.pop_back();
      for (DartId d : g.nodes[u].darts) {
        NodeId v = g.darts[g.darts[d].partner].node;
        if (comp[v] < 0) {
          comp[v] = nc;
          stack.push_back(v);
        }
      }
    }
    ++nc;
  }
  return nc;
}

}  // namespace ktg::detail
