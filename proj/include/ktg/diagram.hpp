#pragma once

#include <string>
#include <vector>

#include "ktg/types.hpp"

namespace ktg {

// KTG diagram as a combinatorial map: crossings and source/sink trivalent
// vertices carry counterclockwise dart lists; crossing slot 0 is the
// incoming understrand (PD convention). Closed node-free components are
// tracked by the free-loop counters.
enum class DiagNodeKind : uint8_t { Crossing, Source, Sink };

struct DiagNode {
  DiagNodeKind kind;
  std::vector<DartId> darts;  // ccw rotation order
};

struct DiagDart {
  NodeId node = kNone;
  int slot = 0;
  DartId partner = kNone;
  Dir dir = Dir::Un;
};

struct GraphDiagram {
  std::vector<DiagNode> nodes;
  std::vector<DiagDart> darts;
  int loops_pos = 0;
  int loops_neg = 0;

  DartId next(DartId d) const {
    const auto& n = nodes[darts[d].node];
    return n.darts[(darts[d].slot + 1) % n.darts.size()];
  }
  DartId prev(DartId d) const {
    const auto& n = nodes[darts[d].node];
    return n.darts[(darts[d].slot + n.darts.size() - 1) % n.darts.size()];
  }
  int crossing_count() const;
  // Positive iff the overstrand enters at rotation slot 3.
  bool crossing_positive(NodeId n) const;
};

struct Violation {
  bool warning = false;
  std::string code;
  std::string message;
  NodeId node = kNone;
  DartId dart = kNone;
};

struct ValidationReport {
  std::vector<Violation> items;
  bool ok() const {
    for (const auto& v : items)
      if (!v.warning) return false;
    return true;
  }
  std::string to_string() const;
};

struct ComponentEuler {
  int vertices = 0;
  int edges = 0;
  int faces = 0;
  int genus = 0;
};

ValidationReport validate_diagram(const GraphDiagram& d);
std::vector<ComponentEuler> euler_check(const GraphDiagram& d);

// Face orbits of the permutation next∘partner, each sorted to start at its
// smallest dart; orbit list sorted by that dart.
std::vector<std::vector<DartId>> faces(const GraphDiagram& d);

// Diagram text format: one node per line, '#' comments.
//   X[a,b,c,d]   crossing, darts ccw from the incoming understrand
//   V+[a,b,c]    source vertex   V-[a,b,c]  sink vertex
//   O[+] / O[-]  free loop
// Arc labels are positive integers appearing exactly twice. Orientations are
// inferred; explicit '<'/'>' prefixes override (used by test fixtures).
GraphDiagram parse_diagram(const std::string& text);
GraphDiagram load_diagram(const std::string& path);
std::string serialize_diagram(const GraphDiagram& d);

// Canonical key for a diagram up to map isomorphism; also used to compare
// move results. Stable across runs.
std::string diagram_canonical_key(const GraphDiagram& d);

}  // namespace ktg
