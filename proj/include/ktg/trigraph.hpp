#pragma once

#include <map>
#include <string>
#include <vector>

#include "ktg/diagram.hpp"
#include "ktg/types.hpp"

namespace ktg {

// Decoration class of a node-free closed component.
struct LoopClass {
  EdgeKind kind = EdgeKind::Thick;
  LoopOrient orient = LoopOrient::Un;
  std::string label;  // empty = unlabeled
  auto operator<=>(const LoopClass&) const = default;
  std::string to_string() const;
};

struct TriNode {
  VertexType type;
  std::vector<DartId> darts;  // ccw rotation order
};

struct TriDart {
  NodeId node = kNone;
  int slot = 0;
  DartId partner = kNone;
  Dir dir = Dir::Un;
  EdgeKind kind = EdgeKind::Thick;
  std::string label;  // edge label, duplicated on both darts
};

// A label trigraph state: planar graph with vertex types V.1-V.10, thick or
// thin edges, partial orientation, optional edge labels, plus free-loop
// counters. May be a disjoint union; the empty trigraph is a valid generator.
struct LabelTrigraph {
  std::vector<TriNode> nodes;
  std::vector<TriDart> darts;
  std::map<LoopClass, int> loops;

  DartId next(DartId d) const {
    const auto& n = nodes[darts[d].node];
    return n.darts[(darts[d].slot + 1) % n.darts.size()];
  }
  DartId prev(DartId d) const {
    const auto& n = nodes[darts[d].node];
    return n.darts[(darts[d].slot + n.darts.size() - 1) % n.darts.size()];
  }
  int loop_total() const;
  bool empty() const { return nodes.empty() && loops.empty(); }
};

// One legal (kind, dir) cyclic pattern for a vertex type.
struct VertexSignature {
  VertexType type;
  std::vector<EdgeKind> kinds;
  std::vector<Dir> dirs;
};

struct SignatureTable {
  std::vector<VertexSignature> rows;
  bool has_type(VertexType t) const;
  // Cyclic-rotation match (no reflection).
  bool admits(VertexType t, const std::vector<EdgeKind>& kinds,
              const std::vector<Dir>& dirs) const;
};

// Structural checks (involution, slots, edge orientation pairing) plus
// signature-table conformance. Types absent from the table get warnings,
// mismatches against present rows are violations.
ValidationReport validate_trigraph(const LabelTrigraph& g, const SignatureTable& sigs);
ValidationReport validate_trigraph_structure(const LabelTrigraph& g);

std::vector<ComponentEuler> euler_check(const LabelTrigraph& g);
std::vector<std::vector<DartId>> faces(const LabelTrigraph& g);

// Trigraph text format (extends the diagram format):
//   V.7[<1n@x,<2,<3]   node line: type, then arc tokens ccw
//   O[t+] O[n.]        free loop: kind letter (t/n) + orientation (+/-/.)
// Arc token: ('<'|'>')? INT ('n')? ('@' label)? — '<' incoming, '>' outgoing,
// bare unoriented; 'n' thin; '@' edge label.
LabelTrigraph parse_trigraph(const std::string& text);
std::string serialize_trigraph(const LabelTrigraph& g);

}  // namespace ktg
