#include <doctest.h>

#include "ktg/match.hpp"

using namespace ktg;

namespace {
const char* kThetaOriented = "V.10[>1,>2,>3]; V.9[<1,<3,<2]";
}

TEST_CASE("match: a single oriented thick edge matches once per edge") {
  auto g = parse_trigraph(kThetaOriented);
  auto f = parse_fragment("L[1,>1]; L[2,<1]", {});
  auto sites = match_sites(g, f);
  CHECK(sites.size() == 3);
}

TEST_CASE("match: an unoriented strand matches each unoriented edge both ways") {
  auto g = parse_trigraph("V.9[1,2,3]; V.9[1,3,2]");
  auto f = parse_fragment("L[1,1]; L[2,1]", {});
  CHECK(match_sites(g, f).size() == 6);
}

TEST_CASE("match: a closed thick loop finds no site in the theta trigraph") {
  auto g = parse_trigraph(kThetaOriented);
  Fragment loop;
  loop.loops.push_back({EdgeKind::Thick, LoopOrient::Un, {}});
  CHECK(match_sites(g, loop).empty());
}

TEST_CASE("match: the loop rule has two matches on a two-loop state") {
  auto g = parse_trigraph("O[t.]; O[t.]");
  Fragment loop;
  loop.loops.push_back({EdgeKind::Thick, LoopOrient::Un, {}});
  CHECK(match_sites(g, loop).size() == 2);
  // Two indistinguishable fragment loops embed in 2 * 1 ordered ways.
  Fragment two;
  two.loops.push_back({EdgeKind::Thick, LoopOrient::Un, {}});
  two.loops.push_back({EdgeKind::Thick, LoopOrient::Un, {}});
  CHECK(match_sites(g, two).size() == 2);
}

TEST_CASE("match: empty fragment embeds exactly once") {
  auto g = parse_trigraph(kThetaOriented);
  CHECK(match_sites(g, Fragment{}).size() == 1);
  CHECK(match_sites(parse_trigraph(""), Fragment{}).size() == 1);
}

TEST_CASE("match: node fragment respects type and rotation") {
  auto g = parse_trigraph(kThetaOriented);
  // A source vertex with three outgoing legs: three rotations of the match.
  auto f = parse_fragment("V.10[>1,>2,>3]; L[1,<1]; L[2,<2]; L[3,<3]", {});
  CHECK(match_sites(g, f).size() == 3);
  auto fsink = parse_fragment("V.9[<1,<2,<3]; L[1,>1]; L[2,>2]; L[3,>3]", {});
  CHECK(match_sites(g, fsink).size() == 3);
  // No V.5 anywhere.
  auto f5 = parse_fragment("V.5[>1n,>2,>3]; L[1,<1n]; L[2,<2]; L[3,<3]", {});
  CHECK(match_sites(g, f5).empty());
}

TEST_CASE("match: whole-theta fragment matches the doubly-cut edge pattern") {
  auto g = parse_trigraph(kThetaOriented);
  // The full theta as a closed fragment: one embedding per map automorphism.
  auto f = parse_fragment("V.10[>1,>2,>3]; V.9[<1,<3,<2]", {});
  CHECK(match_sites(g, f).size() == 3);
}

TEST_CASE("match: labels must agree and variables bind consistently") {
  auto g = parse_trigraph("V.5[>1n@foo,>2,>3]; V.7[<1n@foo,<3,<2]");
  auto concrete = parse_fragment("L[1,>1n@foo]; L[2,<1n@foo]", {});
  CHECK(match_sites(g, concrete).size() == 1);
  auto wrong = parse_fragment("L[1,>1n@bar]; L[2,<1n@bar]", {});
  CHECK(match_sites(g, wrong).empty());
  auto var = parse_fragment("L[1,>1n@l]; L[2,<1n@l]", {"l"});
  auto sites = match_sites(g, var);
  REQUIRE(sites.size() == 1);
  CHECK(sites[0].bindings.at("l") == "foo");
  // Unlabeled pattern edges match only unlabeled host edges.
  auto plain = parse_fragment("L[1,>1n]; L[2,<1n]", {});
  CHECK(match_sites(g, plain).empty());
}

TEST_CASE("match: variable consistency across two edges") {
  auto g = parse_trigraph("V.5[>1n@a,>2,>3]; V.7[<1n@a,<3,<2]; V.5[>4n@b,>5,>6]; V.7[<4n@b,<6,<5]");
  // One thin labeled edge bound to @l: matches both components.
  auto f = parse_fragment("L[1,>1n@l]; L[2,<1n@l]", {"l"});
  CHECK(match_sites(g, f).size() == 2);
}

TEST_CASE("match: deterministic order") {
  auto g = parse_trigraph(kThetaOriented);
  auto f = parse_fragment("L[1,>1]; L[2,<1]", {});
  auto s1 = match_sites(g, f);
  auto s2 = match_sites(g, f);
  REQUIRE(s1.size() == s2.size());
  for (size_t i = 0; i < s1.size(); ++i) CHECK(s1[i].dart_image == s2[i].dart_image);
}

TEST_CASE("match: the bundled loop-value rule has two matches on a two-loop state") {
  auto rs = load_ruleset(std::string(KTG_SOURCE_DIR) + "/rules/kauffman.rules");
  REQUIRE(rs.scalars.size() == 1);
  auto g = parse_trigraph("O[t.]; O[t.]");
  CHECK(match_sites(g, rs.scalars[0].lhs).size() == 2);
}
