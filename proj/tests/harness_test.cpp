#include <doctest.h>

#include "ktg/harness.hpp"

using namespace ktg;

namespace {

std::string src(const std::string& rel) { return std::string(KTG_SOURCE_DIR) + "/" + rel; }
GraphDiagram corpus(const std::string& rel) { return load_diagram(src("corpus/" + rel)); }
RuleSet kauffman() { return load_ruleset(src("rules/kauffman.rules")); }

}  // namespace

TEST_CASE("harness: kauffman certifies omega2 at every site of hopf and theta") {
  auto rs = kauffman();
  HarnessBudget budget;
  for (const char* rel : {"links/hopf.ktg", "ktg/theta.ktg"}) {
    auto d = corpus(rel);
    for (MoveDir dir : {MoveDir::Apply, MoveDir::Inverse}) {
      for (const auto& m : enumerate_move_sites(d, MoveKind::Omega2, -1, dir)) {
        auto r = certify_invariance(d, m, rs, budget);
        INFO(rel << " " << m.to_string() << " " << r.error);
        CHECK(r.outcome == CertOutcome::Certified);
      }
    }
  }
}

TEST_CASE("harness: kauffman omega1 pairs differ by a unit monomial") {
  auto rs = kauffman();
  HarnessBudget budget;
  auto unknot = corpus("links/unknot.ktg");
  auto sites = enumerate_move_sites(unknot, MoveKind::Omega1);
  REQUIRE(sites.size() == 2);
  Laurent a3 = Laurent::parse("-A^3", rs.ring);
  Laurent a3inv = Laurent::parse("-A^-3", rs.ring);
  for (const auto& m : sites) {
    auto r = certify_invariance(unknot, m, rs, budget);
    CHECK(r.outcome == CertOutcome::Unknown);
    bool pos = r.after == r.before.scaled(a3);
    bool neg = r.after == r.before.scaled(a3inv);
    CHECK((pos || neg));
  }
}

TEST_CASE("harness: identity move certifies with an empty trace") {
  auto rs = kauffman();
  MoveInstance id;
  auto r = certify_invariance(corpus("links/trefoil.ktg"), id, rs, {});
  CHECK(r.outcome == CertOutcome::Certified);
  CHECK(r.cert.length() == 0);
}

TEST_CASE("harness: sweep of the classical moves is fully certified") {
  auto rs = kauffman();
  std::vector<std::pair<std::string, GraphDiagram>> corpus_list = {
      {"theta.ktg", corpus("ktg/theta.ktg")},
      {"trefoil.ktg", corpus("links/trefoil.ktg")},
  };
  auto report = sweep(corpus_list, rs, {MoveKind::Omega2, MoveKind::Omega3}, {});
  CHECK(report.all_certified());
  CHECK_FALSE(report.cells.empty());
  // Rows are grouped by corpus order.
  CHECK(report.cells.front().diagram == "theta.ktg");
  CHECK(report.cells.back().diagram == "trefoil.ktg");
}

TEST_CASE("harness: empty corpus sweeps to an empty certified table") {
  auto report = sweep({}, kauffman(), {MoveKind::Omega1}, {});
  CHECK(report.cells.empty());
  CHECK(report.all_certified());
}

TEST_CASE("harness: the skeleton ruleset reports its first incomplete rule") {
  auto skeleton = load_ruleset(src("rules/label-bracket.rules"));
  auto theta = corpus("ktg/theta.ktg");
  auto sites = enumerate_move_sites(theta, MoveKind::Omega5);
  REQUIRE_FALSE(sites.empty());
  auto r = certify_invariance(theta, sites[0], skeleton, {});
  CHECK(r.outcome == CertOutcome::Error);
  CHECK(r.error.find("ruleset incomplete: RS.1") != std::string::npos);

  auto report = sweep({{"theta.ktg", theta}}, skeleton, {MoveKind::Omega5}, {});
  CHECK_FALSE(report.all_certified());
  for (const auto& c : report.cells) CHECK(c.outcome == CertOutcome::Error);
}

TEST_CASE("harness: report json schema and determinism") {
  auto rs = kauffman();
  std::vector<std::pair<std::string, GraphDiagram>> corpus_list = {
      {"unknot.ktg", corpus("links/unknot.ktg")}};
  auto report = sweep(corpus_list, rs, {MoveKind::Omega1}, {});
  auto text = sweep_report_json(report, true);
  for (const char* key : {"\"ruleset\"", "\"corpus\"", "\"cells\"", "\"summary\"",
                          "\"diagram\"", "\"move\"", "\"variant\"", "\"site\"", "\"outcome\"",
                          "\"trace_steps\"", "\"all_certified\""}) {
    INFO(key);
    CHECK(text.find(key) != std::string::npos);
  }
  CHECK(text.find("wall_ms") == std::string::npos);
  auto text2 = sweep_report_json(report, false);
  CHECK(text2.find("wall_ms") != std::string::npos);

  // Deterministic output is identical across worker counts.
  HarnessBudget par;
  par.workers = 4;
  auto report4 = sweep(corpus_list, rs, {MoveKind::Omega1}, par);
  CHECK(sweep_report_json(report4, true) == text);
}
