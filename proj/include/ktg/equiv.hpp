#pragma once

#include <cstdint>
#include <vector>

#include "ktg/rewrite.hpp"

namespace ktg {

struct EquivBudget {
  uint64_t max_explored = 100000;  // distinct sums admitted to either search
  uint32_t max_depth = 64;
};

// Certificate of equality in the quotient module: two replayable legs meeting
// at a common sum. Verification replays both from their endpoints and checks
// the results coincide.
struct Certificate {
  std::vector<RewriteStep> a_steps;
  std::vector<RewriteStep> b_steps;
  size_t length() const { return a_steps.size() + b_steps.size(); }
};

enum class EquivOutcome : uint8_t { Equal, Unknown };

struct EquivResult {
  EquivOutcome outcome = EquivOutcome::Unknown;
  Certificate cert;
  uint64_t explored = 0;
  bool budget_exhausted = false;
};

// Bidirectional breadth-first search over single apply_rule steps in both
// directions, deduplicated by whole-sum signature. Never returns a false
// Equal: certificates are replayed before returning.
EquivResult equivalent(const FormalSum& a, const FormalSum& b, const RuleSet& rs,
                       const EquivBudget& budget);

// Replays a certificate; true iff both legs replay and meet.
bool verify_certificate(const FormalSum& a, const FormalSum& b, const RuleSet& rs,
                        const Certificate& cert);

}  // namespace ktg
