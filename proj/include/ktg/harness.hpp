#pragma once

#include <string>
#include <vector>

#include "ktg/equiv.hpp"
#include "ktg/moves.hpp"
#include "ktg/statesum.hpp"

namespace ktg {

enum class CertOutcome : uint8_t { Certified, Unknown, Error };

struct CertResult {
  CertOutcome outcome = CertOutcome::Unknown;
  Certificate cert;
  uint64_t explored = 0;
  std::string error;
  // Normalized brackets of the two diagrams, for reporting and for the
  // unit-factor regression on non-invariant rulesets.
  FormalSum before, after;
  CertResult() : before(make_ring({})), after(make_ring({})) {}
};

struct HarnessBudget {
  uint64_t normalize_steps = 1u << 20;
  EquivBudget equiv;
  int workers = 1;
};

// Brackets d and apply_move(d, m) and semi-decides their equality in the
// quotient module. Certified results carry a replayable certificate.
CertResult certify_invariance(const GraphDiagram& d, const MoveInstance& m, const RuleSet& rs,
                              const HarnessBudget& budget);

struct SweepCell {
  std::string diagram;
  MoveKind kind = MoveKind::Identity;
  MoveDir dir = MoveDir::Apply;
  int variant = 0;
  int site = 0;
  std::string site_desc;
  CertOutcome outcome = CertOutcome::Unknown;
  size_t trace_steps = 0;
  int64_t wall_ms = 0;
};

struct SweepReport {
  std::string ruleset;
  std::vector<std::string> corpus;
  std::vector<SweepCell> cells;
  bool all_certified() const;
};

// Runs certify_invariance over corpus x move kinds x sites. Cells may run in
// parallel; row order is fixed by input order regardless of scheduling.
SweepReport sweep(const std::vector<std::pair<std::string, GraphDiagram>>& corpus,
                  const RuleSet& rs, const std::vector<MoveKind>& kinds,
                  const HarnessBudget& budget);

// Report JSON (schema documented in the README); deterministic omits wall
// times so outputs are byte-identical across runs and worker counts.
std::string sweep_report_json(const SweepReport& report, bool deterministic);

}  // namespace ktg
