#pragma once

#include <cstdint>
#include <vector>

#include "ktg/diagram.hpp"
#include "ktg/rewrite.hpp"

namespace ktg {

// Total choice of one smoothing per crossing, in crossing (node) order.
struct StateSelector {
  std::vector<uint8_t> choice;
};

// Streams the 2^n selectors in lexicographic order without materializing.
class StateEnumerator {
 public:
  explicit StateEnumerator(const GraphDiagram& d);
  uint64_t total() const { return total_; }
  bool next(StateSelector& out);

 private:
  int n_;
  uint64_t counter_ = 0, total_;
};

// Replaces every crossing by its selected smoothing fragment and maps
// vertices through the ruleset's vertex mapping. Throws RuleError for
// uncovered crossing classes, incomplete rules or signature violations.
std::pair<Laurent, LabelTrigraph> resolve_state(const GraphDiagram& d, const StateSelector& s,
                                                const RuleSet& rs);

struct BracketResult {
  FormalSum sum;
  uint64_t states = 0;
  bool fixpoint = false;
  uint64_t normalize_steps = 0;
};

// The label bracket: sum over all smoothing states, then normalize. Result is
// bit-identical for any worker count.
BracketResult bracket(const GraphDiagram& d, const RuleSet& rs, uint64_t normalize_budget,
                      int workers = 1);

}  // namespace ktg
