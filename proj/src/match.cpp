#include "ktg/match.hpp"

#include <algorithm>

namespace ktg {

namespace {

struct Matcher {
  const LabelTrigraph& g;
  const Fragment& f;
  std::vector<std::vector<DartId>> dart_comps;  // fragment dart components
  std::vector<Match> out;

  std::vector<DartId> image;       // fragment dart -> host dart
  std::vector<char> host_used;     // host dart claimed by an internal dart
  std::vector<char> host_leg_used; // host dart claimed by a leg dart
  std::vector<NodeId> node_image;  // fragment node -> host node
  std::vector<char> host_node_used;
  std::map<std::string, std::string> bindings;

  explicit Matcher(const LabelTrigraph& g_, const Fragment& f_) : g(g_), f(f_) {
    image.assign(f.darts.size(), kNone);
    host_used.assign(g.darts.size(), 0);
    host_leg_used.assign(g.darts.size(), 0);
    node_image.assign(f.nodes.size(), kNone);
    host_node_used.assign(g.nodes.size(), 0);
    compute_components();
  }

  bool is_leg_dart(DartId fd) const { return f.nodes[f.darts[fd].node].leg > 0; }

  void compute_components() {
    std::vector<int> comp(f.darts.size(), -1);
    for (DartId s = 0; s < static_cast<DartId>(f.darts.size()); ++s) {
      if (comp[s] >= 0) continue;
      int c = static_cast<int>(dart_comps.size());
      dart_comps.emplace_back();
      std::vector<DartId> stack{s};
      comp[s] = c;
      while (!stack.empty()) {
        DartId d = stack.back();
        stack.pop_back();
        dart_comps[c].push_back(d);
        std::vector<DartId> nbrs{f.darts[d].partner};
        if (!is_leg_dart(d)) nbrs.push_back(f.next(d));
        for (DartId e : nbrs)
          if (comp[e] < 0) {
            comp[e] = c;
            stack.push_back(e);
          }
      }
      std::sort(dart_comps[c].begin(), dart_comps[c].end());
      // Anchor preference: smallest dart at a real node, else smallest dart.
      auto it = std::find_if(dart_comps[c].begin(), dart_comps[c].end(),
                             [this](DartId d) { return !is_leg_dart(d); });
      if (it != dart_comps[c].end()) std::swap(dart_comps[c][0], *it);
    }
  }

  bool label_check(const LabelSpec& spec, const std::string& host,
                   std::vector<std::string>& bound) {
    switch (spec.kind) {
      case LabelSpec::None: return host.empty();
      case LabelSpec::Token: return host == spec.text;
      case LabelSpec::Var: {
        auto it = bindings.find(spec.text);
        if (it != bindings.end()) return it->second == host;
        if (host.empty()) return false;  // variables bind actual labels
        bindings[spec.text] = host;
        bound.push_back(spec.text);
        return true;
      }
    }
    return false;
  }

  // Try to root fragment dart fd at host dart hd and propagate; records
  // assignments in `trail` for rollback.
  bool extend(DartId fd0, DartId hd0, std::vector<DartId>& trail,
              std::vector<NodeId>& node_trail, std::vector<std::string>& bound) {
    std::vector<DartId> queue;
    auto assign = [&](DartId fd, DartId hd) -> bool {
      if (image[fd] != kNone) return image[fd] == hd;
      const auto& fdart = f.darts[fd];
      const auto& hdart = g.darts[hd];
      if (fdart.kind != hdart.kind || fdart.dir != hdart.dir) return false;
      if (!label_check(fdart.label, hdart.label, bound)) return false;
      bool leg = is_leg_dart(fd);
      if (leg) {
        if (host_leg_used[hd]) return false;  // legs claim distinct stubs
        host_leg_used[hd] = 1;
      } else {
        if (host_used[hd]) return false;
        host_used[hd] = 1;
        NodeId fn = fdart.node, hn = hdart.node;
        if (node_image[fn] == kNone) {
          if (host_node_used[hn]) return false;
          if (f.nodes[fn].type != g.nodes[hn].type) return false;
          node_image[fn] = hn;
          host_node_used[hn] = 1;
          node_trail.push_back(fn);
        } else if (node_image[fn] != hn) {
          return false;
        }
      }
      image[fd] = hd;
      trail.push_back(fd);
      queue.push_back(fd);
      return true;
    };
    if (!assign(fd0, hd0)) return false;
    for (size_t qi = 0; qi < queue.size(); ++qi) {
      DartId fd = queue[qi];
      DartId hd = image[fd];
      if (!assign(f.darts[fd].partner, g.darts[hd].partner)) return false;
      if (!is_leg_dart(fd)) {
        if (!assign(f.next(fd), g.next(hd))) return false;
      }
    }
    return true;
  }

  void rollback(std::vector<DartId>& trail, std::vector<NodeId>& node_trail,
                std::vector<std::string>& bound) {
    for (DartId fd : trail) {
      DartId hd = image[fd];
      if (is_leg_dart(fd))
        host_leg_used[hd] = 0;
      else
        host_used[hd] = 0;
      image[fd] = kNone;
    }
    for (NodeId fn : node_trail) {
      host_node_used[node_image[fn]] = 0;
      node_image[fn] = kNone;
    }
    for (const auto& v : bound) bindings.erase(v);
  }

  // Leg far-ends that coincide with internal images must be internal ends of
  // other legs (the doubly-cut-edge case); anything else is not an embedding.
  bool legs_admissible() const {
    for (DartId l : f.legs) {
      DartId far = image[l];
      if (!host_used[far]) continue;
      bool ok = false;
      for (DartId l2 : f.legs) {
        DartId p = f.darts[l2].partner;
        if (!is_leg_dart(p) && image[p] == far) {
          ok = true;
          break;
        }
      }
      if (!ok) return false;
    }
    return true;
  }

  void match_component(size_t ci) {
    if (ci == dart_comps.size()) {
      if (legs_admissible()) match_loops();
      return;
    }
    DartId anchor = dart_comps[ci][0];
    for (DartId hd = 0; hd < static_cast<DartId>(g.darts.size()); ++hd) {
      std::vector<DartId> trail;
      std::vector<NodeId> node_trail;
      std::vector<std::string> bound;
      if (extend(anchor, hd, trail, node_trail, bound))
        match_component(ci + 1);
      rollback(trail, node_trail, bound);
    }
  }

  void match_loops() {
    std::vector<std::pair<LoopClass, int>> chosen;
    std::map<std::pair<EdgeKind, LoopOrient>, int> used_count_dummy;
    pick_loop(0, chosen);
  }

  void pick_loop(size_t li, std::vector<std::pair<LoopClass, int>>& chosen) {
    if (li == f.loops.size()) {
      Match m;
      m.dart_image = image;
      m.loop_image = chosen;
      m.bindings = bindings;
      out.push_back(std::move(m));
      return;
    }
    const FragLoop& fl = f.loops[li];
    for (const auto& [cls, count] : g.loops) {
      if (cls.kind != fl.kind || cls.orient != fl.orient) continue;
      std::vector<std::string> bound;
      if (!label_check(fl.label, cls.label, bound)) {
        for (const auto& v : bound) bindings.erase(v);
        continue;
      }
      for (int inst = 0; inst < count; ++inst) {
        bool taken = false;
        for (const auto& [c2, i2] : chosen)
          if (c2 == cls && i2 == inst) taken = true;
        if (taken) continue;
        chosen.push_back({cls, inst});
        pick_loop(li + 1, chosen);
        chosen.pop_back();
      }
      for (const auto& v : bound) bindings.erase(v);
    }
  }
};

}  // namespace

std::vector<Match> match_sites(const LabelTrigraph& g, const Fragment& f) {
  Matcher m(g, f);
  m.match_component(0);
  return m.out;
}

}  // namespace ktg
