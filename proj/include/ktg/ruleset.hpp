#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ktg/canonical.hpp"
#include "ktg/laurent.hpp"
#include "ktg/trigraph.hpp"

namespace ktg {

// Label position in a rule fragment: unlabeled, a concrete token, or a
// rule-scoped variable bound during matching.
struct LabelSpec {
  enum Kind : uint8_t { None, Token, Var } kind = None;
  std::string text;
  bool operator==(const LabelSpec&) const = default;
};

struct FragNode {
  int leg = 0;  // 1-based leg index for boundary pseudo-nodes, 0 for real nodes
  VertexType type = VertexType::V9;
  std::vector<DartId> darts;
};

struct FragDart {
  NodeId node = kNone;
  int slot = 0;
  DartId partner = kNone;
  Dir dir = Dir::Un;
  EdgeKind kind = EdgeKind::Thick;
  LabelSpec label;
};

struct FragLoop {
  EdgeKind kind = EdgeKind::Thick;
  LoopOrient orient = LoopOrient::Un;
  LabelSpec label;
};

// An open trigraph with ordered boundary legs; the machine form of the rule
// pictures. Leg dart direction is the direction seen at the far (context)
// end of the cut edge: '>' means the strand flows into the fragment.
struct Fragment {
  std::vector<FragNode> nodes;
  std::vector<FragDart> darts;
  std::vector<FragLoop> loops;
  std::vector<DartId> legs;  // leg index -> dart at the leg pseudo-node

  DartId next(DartId d) const {
    const auto& n = nodes[darts[d].node];
    return n.darts[(darts[d].slot + 1) % n.darts.size()];
  }
  int real_node_count() const;
  // (kind, dir) per leg; substitution requires lhs/rhs agreement.
  std::vector<std::pair<EdgeKind, Dir>> interface() const;
};

enum class CrossClass : uint8_t { Pos, Neg, Any };

enum class RuleHint : uint8_t { Both, LeftToRight };

struct RelationRule {
  std::string id;
  bool todo = false;
  RuleHint hint = RuleHint::Both;
  std::vector<std::string> label_vars;
  Fragment lhs;
  std::vector<std::pair<Laurent, Fragment>> rhs;
};

struct SmoothingRule {
  std::string id;
  bool todo = false;
  CrossClass applies_to = CrossClass::Any;
  std::vector<std::string> label_vars;
  std::vector<std::pair<Laurent, Fragment>> choices;  // exactly two
};

struct ScalarRule {
  std::string id;  // synthesized: "scalar:<n>"
  Fragment lhs;    // closed (no legs)
  Laurent value;
};

struct RuleSet {
  std::string name;
  RingPtr ring;
  bool strands_oriented = true;
  MirrorPolicy mirror = MirrorPolicy::Oriented;
  std::optional<VertexType> map_source, map_sink;
  SignatureTable sigs;
  std::vector<SmoothingRule> smoothing;
  std::vector<RelationRule> relations;
  std::vector<ScalarRule> scalars;

  std::optional<std::string> first_incomplete() const;
  const SmoothingRule* smoothing_for(CrossClass c) const;
  // Relation view of a scalar rule: lhs -> value * (empty fragment).
  RelationRule scalar_as_relation(size_t i) const;
};

Fragment parse_fragment(const std::string& text, const std::vector<std::string>& label_vars);
std::string serialize_fragment(const Fragment& f);

RuleSet parse_ruleset(const std::string& text);
RuleSet load_ruleset(const std::string& path);
std::string serialize_ruleset(const RuleSet& rs);

}  // namespace ktg
