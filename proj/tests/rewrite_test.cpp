#include <doctest.h>

#include <random>

#include "ktg/rewrite.hpp"

using namespace ktg;

namespace {

std::string src(const std::string& rel) { return std::string(KTG_SOURCE_DIR) + "/" + rel; }

RuleSet kauffman() { return load_ruleset(src("rules/kauffman.rules")); }

FormalSum single(const RuleSet& rs, const std::string& trigraph_text, const std::string& coeff) {
  FormalSum s(rs.ring);
  s.add(Laurent::parse(coeff, rs.ring), parse_trigraph(trigraph_text), rs.mirror);
  return s;
}

}  // namespace

TEST_CASE("formal sum: module laws on random combinations") {
  auto rs = kauffman();
  std::vector<const char*> gens = {"O[t.]", "O[t.]; O[t.]", "V.9[1,2,3]; V.9[1,3,2]", ""};
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> pick(0, 3), coef(-3, 3);
  auto random_sum = [&] {
    FormalSum s(rs.ring);
    for (int i = 0; i < 3; ++i)
      s.add(Laurent::constant(coef(rng), rs.ring), parse_trigraph(gens[pick(rng)]), rs.mirror);
    return s;
  };
  for (int t = 0; t < 50; ++t) {
    FormalSum a = random_sum(), b = random_sum(), c = random_sum();
    CHECK(((a + b) + c) == (a + (b + c)));
    CHECK((a + b) == (b + a));
    CHECK((a + a.scaled(Laurent::constant(-1, rs.ring))).is_zero());
    // No zero coefficients stored.
    FormalSum ab = a + b;
    for (const auto& [k, v] : ab.terms()) CHECK_FALSE(v.is_zero());
  }
}

TEST_CASE("apply: loop-value rule forward sends the unknot state to delta times empty") {
  auto rs = kauffman();
  auto rules = active_relations(rs);
  REQUIRE(rules.size() == 1);
  const auto& loop_rule = rules[0];
  FormalSum s = single(rs, "O[t.]", "1");
  std::string key = s.terms().begin()->first;
  auto sites = match_sites(s.representative(key), loop_rule.lhs);
  REQUIRE(sites.size() == 1);
  auto s2 = apply_rule(s, loop_rule, key, sites[0], RewriteDir::Forward, 0, rs.mirror);
  REQUIRE(s2.size() == 1);
  const auto& [k2, c2] = *s2.terms().begin();
  CHECK(s2.representative(k2).empty());
  CHECK(c2.to_string() == "-A^2 - A^-2");
}

TEST_CASE("apply: forward then backward at the corresponding site is the identity") {
  auto rs = kauffman();
  auto loop_rule = active_relations(rs)[0];
  FormalSum s = single(rs, "O[t.]", "1");
  std::string key = s.terms().begin()->first;
  auto sites = match_sites(s.representative(key), loop_rule.lhs);
  auto s2 = apply_rule(s, loop_rule, key, sites[0], RewriteDir::Forward, 0, rs.mirror);
  // Backward: match the empty rhs fragment inside the [empty] generator.
  std::string k2 = s2.terms().begin()->first;
  auto bsites = match_sites(s2.representative(k2), loop_rule.rhs[0].second);
  REQUIRE(bsites.size() == 1);
  auto s3 = apply_rule(s2, loop_rule, k2, bsites[0], RewriteDir::Backward, 0, rs.mirror);
  CHECK(s3 == s);
}

TEST_CASE("apply: backward needs exact division") {
  auto rs = kauffman();
  auto loop_rule = active_relations(rs)[0];
  FormalSum s = single(rs, "", "1");  // 1 * [empty]
  std::string key = s.terms().begin()->first;
  auto sites = match_sites(s.representative(key), loop_rule.rhs[0].second);
  REQUIRE(sites.size() == 1);
  CHECK_THROWS_AS(apply_rule(s, loop_rule, key, sites[0], RewriteDir::Backward, 0, rs.mirror),
                  NonInvertible);
}

TEST_CASE("apply: identity rules reproduce the sum exactly") {
  auto rs = parse_ruleset(
      "ruleset t\nring\n"
      "vertexsig V.9  thick thick thick in in in\n"
      "vertexsig V.10 thick thick thick out out out\n"
      "rule I.strand:\n"
      "  lhs: { L[1,>1]; L[2,<1] }\n"
      "  rhs: 1 * { L[1,>1]; L[2,<1] }\n"
      "rule I.vertex:\n"
      "  lhs: { V.10[>1,>2,>3]; L[1,<1]; L[2,<2]; L[3,<3] }\n"
      "  rhs: 1 * { V.10[>1,>2,>3]; L[1,<1]; L[2,<2]; L[3,<3] }\n"
      "rule I.cut2:\n"
      "  lhs: { V.10[>1,>4,>3]; V.9[<1,<3,<5]; L[1,<4]; L[2,>5] }\n"
      "  rhs: 1 * { V.10[>1,>4,>3]; V.9[<1,<3,<5]; L[1,<4]; L[2,>5] }\n");
  FormalSum theta(rs.ring);
  theta.add(Laurent::constant(1, rs.ring), parse_trigraph("V.10[>1,>2,>3]; V.9[<1,<3,<2]"),
            rs.mirror);
  std::string key = theta.terms().begin()->first;
  for (const auto& rule : active_relations(rs)) {
    auto sites = match_sites(theta.representative(key), rule.lhs);
    INFO(rule.id);
    CHECK_FALSE(sites.empty());
    for (size_t i = 0; i < sites.size(); ++i) {
      auto s2 = apply_rule(theta, rule, key, sites[i], RewriteDir::Forward, 0, rs.mirror);
      CHECK(s2 == theta);
    }
  }
}

TEST_CASE("apply: label rewriting through a bound variable") {
  auto rs = parse_ruleset(
      "ruleset t\nring\n"
      "vertexsig V.5 thick thick thin out out out\n"
      "vertexsig V.7 thin thick thick in in in\n"
      "rule relabel(@l):\n"
      "  lhs: { L[1,>1n@l]; L[2,<1n@l] }\n"
      "  rhs: 1 * { L[1,>1n@z]; L[2,<1n@z] }\n");
  FormalSum s(rs.ring);
  s.add(Laurent::constant(1, rs.ring),
        parse_trigraph("V.5[>2,>3,>1n@foo]; V.7[<1n@foo,<3,<2]"), rs.mirror);
  std::string key = s.terms().begin()->first;
  auto rule = active_relations(rs)[0];
  auto sites = match_sites(s.representative(key), rule.lhs);
  REQUIRE(sites.size() == 1);
  CHECK(sites[0].bindings.at("l") == "foo");
  auto s2 = apply_rule(s, rule, key, sites[0], RewriteDir::Forward, 0, rs.mirror);
  REQUIRE(s2.size() == 1);
  CHECK(serialize_trigraph(s2.representative(s2.terms().begin()->first)).find("@z") !=
        std::string::npos);
}

TEST_CASE("normalize: kauffman states collapse to a multiple of empty") {
  auto rs = kauffman();
  FormalSum s(rs.ring);
  s.add(Laurent::parse("A^2", rs.ring), parse_trigraph("O[t.]; O[t.]"), rs.mirror);
  s.add(Laurent::parse("2", rs.ring), parse_trigraph("O[t.]"), rs.mirror);
  auto res = normalize(s, rs, 1000);
  CHECK(res.fixpoint);
  CHECK(res.steps == 3);  // two loops + one loop
  REQUIRE(res.sum.size() == 1);
  const auto& [k, c] = *res.sum.terms().begin();
  CHECK(res.sum.representative(k).empty());
  // A^2*delta^2 + 2*delta
  auto delta = Laurent::parse("-A^2 - A^-2", rs.ring);
  CHECK(c == Laurent::parse("A^2", rs.ring) * delta * delta +
                 Laurent::parse("2", rs.ring) * delta);
}

TEST_CASE("normalize: already-normal sums are fixpoints; budget 0 returns input") {
  auto rs = kauffman();
  FormalSum s = single(rs, "", "3");
  auto res = normalize(s, rs, 1000);
  CHECK(res.fixpoint);
  CHECK(res.steps == 0);
  CHECK(res.sum == s);

  FormalSum loops = single(rs, "O[t.]", "1");
  auto res0 = normalize(loops, rs, 0);
  CHECK_FALSE(res0.fixpoint);
  CHECK(res0.sum == loops);
}

TEST_CASE("normalize: deterministic across runs") {
  auto rs = kauffman();
  FormalSum s(rs.ring);
  s.add(Laurent::parse("A", rs.ring), parse_trigraph("O[t.]; O[t.]; O[t.]"), rs.mirror);
  s.add(Laurent::parse("-1", rs.ring), parse_trigraph("O[t.]"), rs.mirror);
  auto r1 = normalize(s, rs, 100);
  auto r2 = normalize(s, rs, 100);
  CHECK(r1.sum.signature() == r2.sum.signature());
  CHECK(r1.steps == r2.steps);
}
