#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ktg/diagram.hpp"

namespace ktg {

enum class MoveKind : uint8_t { Omega1, Omega2, Omega3, Omega4, Omega5, Identity };
enum class MoveDir : uint8_t { Apply, Inverse };

const char* move_kind_name(MoveKind k);
bool parse_move_kind(const std::string& s, MoveKind& out);
int variant_count(MoveKind k);
std::string variant_name(MoveKind k, int variant);

// A site-specific move application. Site anchors by kind/direction:
//   Omega1 apply:   a = edge anchor dart, or a free loop when a_loop >= 0
//                   (a_loop = class 0/1, a = instance); variant 0..3 =
//                   pos_left, pos_right, neg_left, neg_right (loops use 0/2).
//   Omega1 inverse: a = kink crossing node.
//   Omega2 apply:   a, b = darts of distinct edges on one face; a side may
//                   instead be a free loop (a_loop/b_loop = class, a/b =
//                   instance). Variant 0 = first strand over, 1 = under.
//   Omega2 inverse: a = anchor dart of the cancelable bigon face.
//   Omega3:         a = anchor dart of the triangle face, b = sliding side
//                   index 0..2; variant 0 = slider over, 1 = slider under.
//   Omega4 apply:   a = crossing node, b = port whose arc leads to a vertex.
//   Omega4 inverse: a = vertex node, b = corner index (slots b, b+1).
//   Omega5 apply:   a = vertex node, b = corner index; variant 0 = first leg
//                   over (positive twist), 1 = negative twist.
//   Omega5 inverse: a = twist crossing node.
//   Identity:       no site; apply returns the diagram unchanged.
struct MoveInstance {
  MoveKind kind = MoveKind::Identity;
  MoveDir dir = MoveDir::Apply;
  int variant = 0;
  int a = -1, b = -1;
  int a_loop = -1, b_loop = -1;  // >= 0: that side is a free loop of this class
  std::string to_string() const;
};

// Complete, deterministic site list for the requested kind/direction;
// variant -1 means all variants.
std::vector<MoveInstance> enumerate_move_sites(const GraphDiagram& d, MoveKind kind,
                                               int variant = -1,
                                               MoveDir dir = MoveDir::Apply);

// Locally surgered diagram; throws std::invalid_argument on invalid sites.
GraphDiagram apply_move(const GraphDiagram& d, const MoveInstance& m);

// Crossing-count change of one application.
int crossing_delta(const MoveInstance& m);

// The site of the opposite-direction move that undoes m, found by replaying
// candidate sites and comparing canonical keys.
std::optional<MoveInstance> find_inverse_site(const GraphDiagram& original,
                                              const GraphDiagram& moved,
                                              const MoveInstance& m);

}  // namespace ktg
