#include <doctest.h>

#include "ktg/ruleset.hpp"

using namespace ktg;

namespace {
std::string src(const std::string& rel) { return std::string(KTG_SOURCE_DIR) + "/" + rel; }
}  // namespace

TEST_CASE("ruleset: kauffman parses with one variable, two smoothings, one scalar") {
  auto rs = load_ruleset(src("rules/kauffman.rules"));
  CHECK(rs.name == "kauffman");
  REQUIRE(rs.ring->vars.size() == 1);
  CHECK(rs.ring->vars[0] == "A");
  CHECK(rs.smoothing.size() == 2);
  CHECK(rs.scalars.size() == 1);
  CHECK(rs.relations.empty());
  CHECK_FALSE(rs.strands_oriented);
  CHECK_FALSE(rs.first_incomplete().has_value());
  CHECK(rs.scalars[0].value.to_string() == "-A^2 - A^-2");
  REQUIRE(rs.smoothing_for(CrossClass::Pos) != nullptr);
  REQUIRE(rs.smoothing_for(CrossClass::Neg) != nullptr);
  for (const auto& s : rs.smoothing) {
    REQUIRE(s.choices.size() == 2);
    for (const auto& [c, f] : s.choices) CHECK(f.legs.size() == 4);
  }
}

TEST_CASE("ruleset: label-bracket skeleton loads but is incomplete") {
  auto rs = load_ruleset(src("rules/label-bracket.rules"));
  CHECK(rs.name == "label-bracket");
  CHECK(rs.ring->vars.empty());
  CHECK(rs.strands_oriented);
  auto missing = rs.first_incomplete();
  REQUIRE(missing.has_value());
  CHECK(*missing == "RS.1");
  // All the advertised rule ids are present.
  std::vector<std::string> want = {"R1.1", "R1.2", "R2.1", "R2.2", "R2.3", "R2.4", "R3.1",
                                   "R4.1", "R4.2", "R4.3", "R4.4", "R5.1", "R5.2", "R5.3",
                                   "R5.4"};
  REQUIRE(rs.relations.size() == want.size());
  for (size_t i = 0; i < want.size(); ++i) {
    CHECK(rs.relations[i].id == want[i]);
    CHECK(rs.relations[i].todo);
  }
  CHECK(rs.smoothing.size() == 2);
  CHECK(rs.smoothing[0].todo);
}

TEST_CASE("ruleset: bridge fixture parses") {
  auto rs = load_ruleset(src("tests/fixtures/bridge.rules"));
  CHECK(rs.strands_oriented);
  CHECK(rs.map_source == VertexType::V10);
  CHECK(rs.map_sink == VertexType::V9);
  CHECK(rs.scalars.size() == 2);
  CHECK_FALSE(rs.first_incomplete().has_value());
}

TEST_CASE("ruleset: serialize/parse round-trip") {
  for (const char* rel :
       {"rules/kauffman.rules", "rules/label-bracket.rules", "tests/fixtures/bridge.rules"}) {
    auto rs = load_ruleset(src(rel));
    auto rs2 = parse_ruleset(serialize_ruleset(rs));
    CHECK(serialize_ruleset(rs) == serialize_ruleset(rs2));
  }
}

TEST_CASE("ruleset: empty rule body is an error") {
  CHECK_THROWS_WITH_AS(parse_ruleset("ruleset t\nring\nrule R9:\n"),
                       doctest::Contains("empty rule body"), ParseError);
}

TEST_CASE("ruleset: interface mismatch names the rule") {
  const char* text =
      "ruleset t\n"
      "ring\n"
      "rule R8:\n"
      "  lhs: { L[1,1]; L[2,1]; L[3,2]; L[4,2] }\n"
      "  rhs: 1 * { L[1,1]; L[2,1]; L[3,2]; L[4,2]; L[5,3]; L[6,3] }\n";
  CHECK_THROWS_WITH_AS(parse_ruleset(text), doctest::Contains("R8"), ParseError);
}

TEST_CASE("ruleset: unknown vertex type") {
  CHECK_THROWS_AS(parse_ruleset("ruleset t\nring\nvertexsig V.11 thick thick thick in in in\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_ruleset("ruleset t\nring\nscalar { V.3[1,2,3]; V.4[1,3,2] } -> 1\n"),
                  ParseError);  // V.3 not in the signature table
}

TEST_CASE("ruleset: scalar fragments must be closed") {
  CHECK_THROWS_AS(parse_ruleset("ruleset t\nring\nscalar { L[1,1]; L[2,1] } -> 1\n"),
                  ParseError);
}

TEST_CASE("fragment: parse rejects bad leg lists and dangling edges") {
  CHECK_THROWS_AS(parse_fragment("L[1,1]; L[3,1]", {}), ParseError);  // missing L[2]
  CHECK_THROWS_AS(parse_fragment("L[1,1]; L[2,2]", {}), ParseError);  // edges appear once
  CHECK_THROWS_AS(parse_fragment("L[1,>1]; L[2,>1]", {}), ParseError);  // both outgoing
}

TEST_CASE("fragment: label variables bind only when declared") {
  auto f = parse_fragment("L[1,1n@l]; L[2,1n@l]", {"l"});
  CHECK(f.darts[0].label.kind == LabelSpec::Var);
  auto g = parse_fragment("L[1,1n@l]; L[2,1n@l]", {});
  CHECK(g.darts[0].label.kind == LabelSpec::Token);
}
