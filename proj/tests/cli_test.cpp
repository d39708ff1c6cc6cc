#include <doctest.h>

#include <array>
#include <cstdio>
#include <string>

namespace {

struct RunResult {
  int exit_code;
  std::string output;
};

// Runs the tool with stderr folded into stdout.
RunResult run(const std::string& args) {
  std::string cmd = std::string(KTG_TOOL_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string src(const std::string& rel) { return std::string(KTG_SOURCE_DIR) + "/" + rel; }

}  // namespace

TEST_CASE("cli: validate exit codes") {
  auto ok = run("validate --diagram " + src("corpus/ktg/theta.ktg"));
  CHECK(ok.exit_code == 0);
  CHECK(ok.output.find("valid") != std::string::npos);

  auto bad = run("validate --diagram " + src("corpus/invalid/mixed_vertex.ktg"));
  CHECK(bad.exit_code == 1);
  CHECK(bad.output.find("mixed orientation") != std::string::npos);

  auto missing = run("validate --diagram /no/such/file.ktg");
  CHECK(missing.exit_code == 2);

  auto parse_err = run("validate --diagram " + src("corpus/invalid/parse_error_arc.ktg"));
  CHECK(parse_err.exit_code == 2);
}

TEST_CASE("cli: bracket prints the kauffman values") {
  auto r = run("bracket --diagram " + src("corpus/links/unknot.ktg") + " --rules " +
               src("rules/kauffman.rules"));
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("(-A^2 - A^-2) * [empty]") != std::string::npos);

  auto t = run("bracket --diagram " + src("corpus/links/trefoil.ktg") + " --rules " +
               src("rules/kauffman.rules"));
  CHECK(t.exit_code == 0);
  CHECK(t.output.find("(A^7 + A^3 + A^-1 - A^-9) * [empty]") != std::string::npos);

  auto skel = run("bracket --diagram " + src("corpus/ktg/theta.ktg") + " --rules " +
                  src("rules/label-bracket.rules"));
  CHECK(skel.exit_code == 2);
  CHECK(skel.output.find("ruleset incomplete: RS.1") != std::string::npos);
}

TEST_CASE("cli: bracket json is byte-stable across workers") {
  std::string base = "bracket --diagram " + src("corpus/links/trefoil.ktg") + " --rules " +
                     src("rules/kauffman.rules") + " --json --deterministic";
  auto r1 = run(base + " --workers 1");
  auto r8 = run(base + " --workers 8");
  CHECK(r1.exit_code == 0);
  CHECK(r1.output == r8.output);
  CHECK(r1.output.find("\"state_count\": 8") != std::string::npos);
}

TEST_CASE("cli: equiv exit codes and trace output") {
  std::string rules = " --rules " + src("rules/kauffman.rules");
  auto same = run("equiv --diagram-a " + src("corpus/links/unknot.ktg") + " --diagram-b " +
                  src("corpus/links/unknot.ktg") + rules);
  CHECK(same.exit_code == 0);
  CHECK(same.output.find("equal (trace: 0 steps)") != std::string::npos);

  auto r2 = run("equiv --diagram-a " + src("corpus/links/unknot.ktg") + " --diagram-b " +
                src("corpus/links/r2unknot.ktg") + rules);
  CHECK(r2.exit_code == 0);

  auto kink = run("equiv --diagram-a " + src("corpus/links/unknot.ktg") + " --diagram-b " +
                  src("corpus/links/kink_pos.ktg") + rules);
  CHECK(kink.exit_code == 3);
  CHECK(kink.output.find("unknown") != std::string::npos);
}

TEST_CASE("cli: equiv accepts bracket json sums") {
  std::string rules = " --rules " + src("rules/kauffman.rules");
  auto j1 = run("bracket --diagram " + src("corpus/links/hopf.ktg") + rules + " --json");
  REQUIRE(j1.exit_code == 0);
  FILE* f = fopen("/tmp/ktg_cli_hopf.json", "w");
  REQUIRE(f);
  fwrite(j1.output.data(), 1, j1.output.size(), f);
  fclose(f);
  auto eq = run("equiv --sum-a /tmp/ktg_cli_hopf.json --sum-b /tmp/ktg_cli_hopf.json" + rules);
  CHECK(eq.exit_code == 0);
}

TEST_CASE("cli: certify per-site lines and one-step traces") {
  std::string rules = " --rules " + src("rules/kauffman.rules");
  auto r = run("certify --diagram " + src("corpus/links/hopf.ktg") + rules +
               " --move omega2 --dir apply --site 0");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("site 0") != std::string::npos);
  CHECK(r.output.find("certified") != std::string::npos);

  auto o1 = run("certify --diagram " + src("corpus/links/unknot.ktg") + rules +
                " --move omega1");
  CHECK(o1.exit_code == 3);
}

TEST_CASE("cli: sweep writes a report and distinguishes outcomes") {
  std::string rules = " --rules " + src("rules/kauffman.rules");
  auto good = run("sweep --corpus " + src("corpus/ktg") + rules +
                  " --moves omega2,omega3 --deterministic --out /tmp/ktg_cli_sweep.json");
  CHECK(good.exit_code == 0);

  auto with_o1 = run("sweep --corpus " + src("corpus/links") + rules +
                     " --moves omega1 --deterministic");
  CHECK(with_o1.exit_code == 3);

  auto skel = run("sweep --corpus " + src("corpus/ktg") + " --rules " +
                  src("rules/label-bracket.rules") + " --moves omega5 --deterministic");
  CHECK(skel.exit_code == 2);
  CHECK(skel.output.find("error") != std::string::npos);
}

TEST_CASE("cli: sweep of an empty corpus is certified and exits zero") {
  REQUIRE(system("mkdir -p /tmp/ktg_cli_empty && rm -f /tmp/ktg_cli_empty/*.ktg") == 0);
  auto r = run("sweep --corpus /tmp/ktg_cli_empty --rules " + src("rules/kauffman.rules") +
               " --moves omega1..omega5");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("\"total\": 0") != std::string::npos);
}
