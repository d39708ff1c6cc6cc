#include "ktg/canonical.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace ktg {

namespace {

// Generic rooted traversal. The map is given by partner/step permutations on
// a component's darts; decorations are per-dart strings. Visit order: darts
// numbered on first visit, scanning numbered darts in order and offering
// partner then step.
struct Traverser {
  const std::vector<DartId>& partner;
  const std::vector<DartId>& step;       // next (or prev for mirrored sense)
  const std::vector<std::string>& deco;

  std::vector<DartId> order;             // visit index -> dart
  std::vector<int> num;                  // dart -> visit index (-1 unvisited)

  explicit Traverser(const std::vector<DartId>& p, const std::vector<DartId>& s,
                     const std::vector<std::string>& d)
      : partner(p), step(s), deco(d), num(p.size(), -1) {}

  std::string run(DartId root) {
    order.clear();
    std::fill(num.begin(), num.end(), -1);
    visit(root);
    for (size_t i = 0; i < order.size(); ++i) {
      visit(partner[order[i]]);
      visit(step[order[i]]);
    }
    std::ostringstream os;
    for (DartId d : order)
      os << num[partner[d]] << "," << num[step[d]] << "," << deco[d] << ";";
    return os.str();
  }

 private:
  void visit(DartId d) {
    if (num[d] < 0) {
      num[d] = static_cast<int>(order.size());
      order.push_back(d);
    }
  }
};

struct ComponentCanon {
  std::string key;
  std::vector<DartId> order;  // visit order of original darts
  bool mirrored = false;
};

}  // namespace

CanonicalResult canonical_form(const LabelTrigraph& g, MirrorPolicy policy) {
  {
    auto rep = validate_trigraph_structure(g);
    if (!rep.ok())
      throw std::invalid_argument("canonical_form: invalid trigraph: " + rep.to_string());
  }

  int nd = static_cast<int>(g.darts.size());
  std::vector<DartId> partner(nd), nxt(nd), prv(nd);
  std::vector<std::string> deco(nd);
  for (DartId i = 0; i < nd; ++i) {
    partner[i] = g.darts[i].partner;
    nxt[i] = g.next(i);
    prv[i] = g.prev(i);
    const auto& dt = g.darts[i];
    deco[i] = vertex_type_name(g.nodes[dt.node].type) + "," + kind_char(dt.kind) +
              dir_char(dt.dir) + (dt.label.empty() ? "" : "@" + dt.label);
  }

  // Partition darts into components (orbit of <partner, next>).
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

  std::vector<ComponentCanon> canons;
  Traverser fwd(partner, nxt, deco), bwd(partner, prv, deco);
  for (const auto& m : members) {
    ComponentCanon best;
    for (DartId root : m) {
      std::string s = fwd.run(root);
      if (best.key.empty() || s < best.key) best = {s, fwd.order, false};
      if (policy == MirrorPolicy::MirrorQuotient) {
        s = bwd.run(root);
        if (s < best.key) best = {s, bwd.order, true};
      }
    }
    canons.push_back(std::move(best));
  }
  std::sort(canons.begin(), canons.end(),
            [](const ComponentCanon& a, const ComponentCanon& b) { return a.key < b.key; });

  // Rebuild the relabeled graph: components in key order, darts in visit order.
  CanonicalResult res;
  std::ostringstream key;
  LabelTrigraph& out = res.graph;
  for (const auto& c : canons) {
    key << "{" << c.key << "}";
    std::vector<DartId> new_id(g.darts.size(), kNone);
    int base = static_cast<int>(out.darts.size());
    for (size_t i = 0; i < c.order.size(); ++i) new_id[c.order[i]] = base + static_cast<int>(i);
    out.darts.resize(out.darts.size() + c.order.size());
    std::map<NodeId, NodeId> node_map;
    for (DartId od : c.order) {
      NodeId on = g.darts[od].node;
      if (!node_map.count(on)) {
        NodeId nn = static_cast<NodeId>(out.nodes.size());
        node_map[on] = nn;
        out.nodes.push_back({g.nodes[on].type, {}});
        // Rotation starting from this node's first-visited dart, preserving
        // (or reversing, when mirrored) the cyclic order.
        DartId d = od;
        do {
          out.nodes[nn].darts.push_back(new_id[d]);
          d = c.mirrored ? g.prev(d) : g.next(d);
        } while (d != od);
      }
    }
    for (DartId od : c.order) {
      const auto& src = g.darts[od];
      auto& dst = out.darts[new_id[od]];
      dst.node = node_map[src.node];
      dst.partner = new_id[src.partner];
      dst.dir = src.dir;
      dst.kind = src.kind;
      dst.label = src.label;
    }
    for (auto& [on, nn] : node_map)
      for (size_t s = 0; s < out.nodes[nn].darts.size(); ++s)
        out.darts[out.nodes[nn].darts[s]].slot = static_cast<int>(s);
  }
  out.loops = g.loops;
  for (const auto& [cls, cnt] : g.loops)
    key << "L" << cls.to_string() << "x" << cnt << "|";
  res.key = key.str();
  if (res.key.empty()) res.key = "empty";
  return res;
}

}  // namespace ktg
