#pragma once

#include <string>

#include "ktg/diagram.hpp"
#include "ktg/trigraph.hpp"

namespace ktg {

// Reflection handling for canonical forms. Oriented keeps the rotation order
// as-is (planar isotopy preserves it); MirrorQuotient also identifies the
// reflected embedding.
enum class MirrorPolicy : uint8_t { Oriented, MirrorQuotient };

struct CanonicalResult {
  std::string key;
  LabelTrigraph graph;  // relabeled into canonical traversal order
};

// Minimal traversal string over all roots (and both senses under
// MirrorQuotient); components canonicalized independently, sorted, joined.
// Equal keys iff isomorphic as decorated oriented maps. Throws on
// structurally broken input.
CanonicalResult canonical_form(const LabelTrigraph& g,
                               MirrorPolicy policy = MirrorPolicy::Oriented);

inline std::string canonical_key(const LabelTrigraph& g,
                                 MirrorPolicy policy = MirrorPolicy::Oriented) {
  return canonical_form(g, policy).key;
}

}  // namespace ktg
