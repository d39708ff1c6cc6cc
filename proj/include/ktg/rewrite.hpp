#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "ktg/canonical.hpp"
#include "ktg/laurent.hpp"
#include "ktg/match.hpp"
#include "ktg/ruleset.hpp"

namespace ktg {

// Finite Laurent-combination of canonical label trigraphs. Keys are canonical;
// representatives are stored in canonical relabeling, so match site indices
// are stable across runs.
class FormalSum {
 public:
  explicit FormalSum(RingPtr ring) : ring_(std::move(ring)) {}

  const RingPtr& ring() const { return ring_; }
  bool is_zero() const { return terms_.empty(); }
  size_t size() const { return terms_.size(); }

  void add(const Laurent& c, const LabelTrigraph& g, MirrorPolicy policy);
  void add_canonical(const Laurent& c, const std::string& key, const LabelTrigraph& canon_rep);

  FormalSum operator+(const FormalSum& o) const;
  FormalSum scaled(const Laurent& c) const;
  bool operator==(const FormalSum& o) const;

  // Disjoint-union product: coefficients multiply, generators union.
  FormalSum disjoint_product(const FormalSum& o, MirrorPolicy policy) const;

  const std::map<std::string, Laurent>& terms() const { return terms_; }
  const LabelTrigraph& representative(const std::string& key) const;
  const Laurent& coefficient(const std::string& key) const;

  // Whole-sum canonical signature (sorted key=coefficient list).
  std::string signature() const;
  std::string to_string() const;

 private:
  RingPtr ring_;
  std::map<std::string, Laurent> terms_;
  std::map<std::string, LabelTrigraph> reps_;
};

// Replaces the lhs match inside `host` by the given rhs fragment.
LabelTrigraph glue(const LabelTrigraph& host, const Fragment& lhs, const Match& site,
                   const Fragment& rhs);

enum class RewriteDir : uint8_t { Forward, Backward };

// One rewrite step, replayable: term = 0 for forward (lhs matched), rhs term
// index for backward; site indexes into match_sites of the stored
// representative.
struct RewriteStep {
  std::string rule_id;
  std::string key;
  RewriteDir dir = RewriteDir::Forward;
  int term = 0;
  int site = 0;
};

struct NonInvertible : RuleError {
  using RuleError::RuleError;
};

// Relation rules and scalar rules participate; scalar rules are their
// relation view (lhs -> value * empty).
std::vector<RelationRule> active_relations(const RuleSet& rs);

FormalSum apply_rule(const FormalSum& s, const RelationRule& rule, const std::string& key,
                     const Match& site, RewriteDir dir, int backward_term, MirrorPolicy policy);

// Replays a recorded step (re-enumerating sites); throws if out of range.
FormalSum apply_step(const FormalSum& s, const RuleSet& rs, const RewriteStep& step);

struct NormalizeResult {
  FormalSum sum;
  bool fixpoint = false;
  uint64_t steps = 0;
};

// Greedy left-to-right + scalar normalization, deterministic (lowest key,
// lowest rule id, first site).
NormalizeResult normalize(const FormalSum& s, const RuleSet& rs, uint64_t budget);

}  // namespace ktg
