// Command-line front end: validation, label-bracket computation, quotient
// equality, per-move certification and the corpus sweep.
//
// Exit codes: 0 success/Equal/Certified, 1 validation failure,
// 2 I/O-or-parse (and other hard errors), 3 Unknown.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ktg/harness.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0, kExitInvalid = 1, kExitIo = 2, kExitUnknown = 3;

uint64_t default_equiv_budget() {
  if (const char* env = std::getenv("KTGBRACKET_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
    std::cerr << "warning: ignoring malformed KTGBRACKET_BUDGET\n";
  }
  return 100000;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

ordered_json bracket_json(const std::string& diagram_path, const ktg::RuleSet& rs,
                          const ktg::BracketResult& br) {
  ordered_json j;
  j["ruleset"] = rs.name;
  j["diagram"] = diagram_path;
  j["state_count"] = br.states;
  j["fixpoint"] = br.fixpoint;
  j["normalize_steps"] = br.normalize_steps;
  ordered_json terms = ordered_json::array();
  for (const auto& [key, coeff] : br.sum.terms()) {
    const auto& rep = br.sum.representative(key);
    ordered_json t;
    t["canonical_key"] = key;
    t["coefficient"] = coeff.to_string();
    t["representative"] = rep.empty() ? "empty" : ktg::serialize_trigraph(rep);
    terms.push_back(std::move(t));
  }
  j["terms"] = std::move(terms);
  return j;
}

ktg::FormalSum sum_from_json(const std::string& path, const ktg::RingPtr& ring,
                             ktg::MirrorPolicy mirror) {
  auto j = ordered_json::parse(slurp(path));
  ktg::FormalSum s(ring);
  for (const auto& t : j.at("terms")) {
    std::string rep = t.at("representative").get<std::string>();
    ktg::LabelTrigraph g =
        rep == "empty" ? ktg::LabelTrigraph{} : ktg::parse_trigraph(rep);
    s.add(ktg::Laurent::parse(t.at("coefficient").get<std::string>(), ring), g, mirror);
  }
  return s;
}

std::vector<ktg::MoveKind> parse_moves_arg(const std::string& arg) {
  std::vector<ktg::MoveKind> out;
  auto add = [&out](const std::string& name) {
    ktg::MoveKind k;
    if (!ktg::parse_move_kind(name, k))
      throw CLI::ValidationError("--moves", "unknown move '" + name + "'");
    out.push_back(k);
  };
  auto dots = arg.find("..");
  if (dots != std::string::npos) {
    ktg::MoveKind lo, hi;
    if (!ktg::parse_move_kind(arg.substr(0, dots), lo) ||
        !ktg::parse_move_kind(arg.substr(dots + 2), hi) || hi < lo)
      throw CLI::ValidationError("--moves", "bad range '" + arg + "'");
    for (int k = static_cast<int>(lo); k <= static_cast<int>(hi); ++k)
      out.push_back(static_cast<ktg::MoveKind>(k));
    return out;
  }
  std::string cur;
  for (char ch : arg + ",") {
    if (ch == ',') {
      if (!cur.empty()) add(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  return out;
}

std::string cert_json(const ktg::Certificate& cert) {
  ordered_json steps = ordered_json::array();
  auto emit = [&steps](const std::vector<ktg::RewriteStep>& leg, const char* from) {
    for (const auto& st : leg) {
      ordered_json e;
      e["from"] = from;
      e["rule"] = st.rule_id;
      e["key"] = st.key;
      e["dir"] = st.dir == ktg::RewriteDir::Forward ? "forward" : "backward";
      e["term"] = st.term;
      e["site"] = st.site;
      steps.push_back(std::move(e));
    }
  };
  emit(cert.a_steps, "a");
  emit(cert.b_steps, "b");
  return steps.dump(2);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"label bracket toolkit for knotted trivalent graph diagrams"};
  app.require_subcommand(1);

  std::string diagram_path, rules_path, diagram_b, sum_a, sum_b, corpus_dir, out_path;
  std::string move_name, variant_name_arg, dir_name = "apply", moves_arg = "omega1..omega5";
  uint64_t normalize_budget = 1u << 20;
  uint64_t equiv_budget = default_equiv_budget();
  uint32_t equiv_depth = 64;
  int workers = 1;
  int site = -1;
  bool as_json = false, deterministic = false;

  auto add_common = [&](CLI::App* cmd, bool needs_rules) {
    if (needs_rules) cmd->add_option("--rules", rules_path, "rule file")->required();
    cmd->add_option("--budget", equiv_budget, "equivalence search budget (explored sums)");
    cmd->add_option("--depth", equiv_depth, "equivalence search depth limit");
    cmd->add_option("--normalize-budget", normalize_budget, "normalization step budget");
    cmd->add_option("--workers", workers, "worker threads");
    cmd->add_flag("--json", as_json, "JSON output");
    cmd->add_flag("--deterministic", deterministic, "omit timing for byte-stable output");
  };

  auto* cmd_validate = app.add_subcommand("validate", "check diagram invariants");
  cmd_validate->add_option("--diagram", diagram_path, "diagram file")->required();

  auto* cmd_bracket = app.add_subcommand("bracket", "compute the label bracket");
  cmd_bracket->add_option("--diagram", diagram_path, "diagram file")->required();
  add_common(cmd_bracket, true);

  auto* cmd_equiv = app.add_subcommand("equiv", "semi-decide equality in the quotient module");
  cmd_equiv->add_option("--diagram-a", diagram_path, "first diagram");
  cmd_equiv->add_option("--diagram-b", diagram_b, "second diagram");
  cmd_equiv->add_option("--sum-a", sum_a, "first bracket JSON file");
  cmd_equiv->add_option("--sum-b", sum_b, "second bracket JSON file");
  add_common(cmd_equiv, true);

  auto* cmd_certify = app.add_subcommand("certify", "certify move invariance per site");
  cmd_certify->add_option("--diagram", diagram_path, "diagram file")->required();
  cmd_certify->add_option("--move", move_name, "omega1..omega5 or identity")->required();
  cmd_certify->add_option("--variant", variant_name_arg, "variant name or index");
  cmd_certify->add_option("--site", site, "site index (default: all sites)");
  cmd_certify->add_option("--dir", dir_name, "apply|inverse");
  add_common(cmd_certify, true);

  auto* cmd_sweep = app.add_subcommand("sweep", "certify a corpus x moves grid");
  cmd_sweep->add_option("--corpus", corpus_dir, "directory of .ktg files")->required();
  cmd_sweep->add_option("--moves", moves_arg, "comma list or range, e.g. omega1..omega5");
  cmd_sweep->add_option("--out", out_path, "report file (default stdout)");
  add_common(cmd_sweep, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_validate->parsed()) {
      auto d = ktg::load_diagram(diagram_path);
      auto rep = ktg::validate_diagram(d);
      std::cout << rep.to_string();
      if (rep.ok()) {
        std::cout << "valid\n";
        return kExitOk;
      }
      return kExitInvalid;
    }

    if (cmd_bracket->parsed()) {
      auto rs = ktg::load_ruleset(rules_path);
      auto d = ktg::load_diagram(diagram_path);
      auto br = ktg::bracket(d, rs, normalize_budget, workers);
      if (as_json) {
        std::cout << bracket_json(diagram_path, rs, br).dump(2) << "\n";
      } else {
        if (br.sum.is_zero()) std::cout << "0\n";
        for (const auto& [key, coeff] : br.sum.terms()) {
          const auto& rep = br.sum.representative(key);
          std::cout << "(" << coeff.to_string() << ") * ["
                    << (rep.empty() ? "empty" : ktg::serialize_trigraph(rep)) << "]\n";
        }
        std::cout << "states: " << br.states << ", fixpoint: " << (br.fixpoint ? "yes" : "no")
                  << "\n";
      }
      return kExitOk;
    }

    if (cmd_equiv->parsed()) {
      auto rs = ktg::load_ruleset(rules_path);
      ktg::FormalSum a(rs.ring), b(rs.ring);
      if (!sum_a.empty() && !sum_b.empty()) {
        a = sum_from_json(sum_a, rs.ring, rs.mirror);
        b = sum_from_json(sum_b, rs.ring, rs.mirror);
      } else if (!diagram_path.empty() && !diagram_b.empty()) {
        a = ktg::bracket(ktg::load_diagram(diagram_path), rs, normalize_budget, workers).sum;
        b = ktg::bracket(ktg::load_diagram(diagram_b), rs, normalize_budget, workers).sum;
      } else {
        std::cerr << "equiv needs --diagram-a/--diagram-b or --sum-a/--sum-b\n";
        return kExitIo;
      }
      auto res = ktg::equivalent(a, b, rs, {equiv_budget, equiv_depth});
      if (res.outcome == ktg::EquivOutcome::Equal) {
        std::cout << "equal (trace: " << res.cert.length() << " steps)\n"
                  << cert_json(res.cert) << "\n";
        return kExitOk;
      }
      std::cout << "unknown (explored " << res.explored << " sums)\n";
      return kExitUnknown;
    }

    if (cmd_certify->parsed()) {
      auto rs = ktg::load_ruleset(rules_path);
      auto d = ktg::load_diagram(diagram_path);
      ktg::MoveKind kind;
      if (!ktg::parse_move_kind(move_name, kind)) {
        std::cerr << "unknown move '" << move_name << "'\n";
        return kExitIo;
      }
      int variant = -1;
      if (!variant_name_arg.empty()) {
        for (int v = 0; v < ktg::variant_count(kind); ++v)
          if (ktg::variant_name(kind, v) == variant_name_arg ||
              std::to_string(v) == variant_name_arg)
            variant = v;
        if (variant < 0) {
          std::cerr << "unknown variant '" << variant_name_arg << "'\n";
          return kExitIo;
        }
      }
      ktg::MoveDir dir = dir_name == "inverse" ? ktg::MoveDir::Inverse : ktg::MoveDir::Apply;
      auto sites = ktg::enumerate_move_sites(d, kind, variant, dir);
      ktg::HarnessBudget budget{normalize_budget, {equiv_budget, equiv_depth}, workers};
      bool any_unknown = false;
      for (size_t i = 0; i < sites.size(); ++i) {
        if (site >= 0 && static_cast<size_t>(site) != i) continue;
        auto r = ktg::certify_invariance(d, sites[i], rs, budget);
        std::cout << "site " << i << " " << sites[i].to_string() << ": ";
        switch (r.outcome) {
          case ktg::CertOutcome::Certified:
            std::cout << "certified (trace: " << r.cert.length() << " steps)\n";
            break;
          case ktg::CertOutcome::Unknown:
            std::cout << "unknown (explored " << r.explored << " sums)\n";
            any_unknown = true;
            break;
          case ktg::CertOutcome::Error:
            std::cout << "error: " << r.error << "\n";
            throw std::runtime_error(r.error);
        }
      }
      if (site >= 0 && static_cast<size_t>(site) >= sites.size()) {
        std::cerr << "site index out of range (" << sites.size() << " sites)\n";
        return kExitIo;
      }
      std::cout << "sites: " << sites.size() << "\n";
      return any_unknown ? kExitUnknown : kExitOk;
    }

    if (cmd_sweep->parsed()) {
      auto rs = ktg::load_ruleset(rules_path);
      std::vector<std::pair<std::string, ktg::GraphDiagram>> corpus;
      std::vector<fs::path> files;
      for (const auto& entry : fs::directory_iterator(corpus_dir))
        if (entry.path().extension() == ".ktg") files.push_back(entry.path());
      std::sort(files.begin(), files.end());
      for (const auto& f : files)
        corpus.push_back({f.filename().string(), ktg::load_diagram(f.string())});
      auto kinds = parse_moves_arg(moves_arg);
      ktg::HarnessBudget budget{normalize_budget, {equiv_budget, equiv_depth}, workers};
      auto report = ktg::sweep(corpus, rs, kinds, budget);
      std::string text = ktg::sweep_report_json(report, deterministic);
      if (out_path.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write report: " + out_path);
        out << text;
      }
      for (const auto& c : report.cells)
        if (c.outcome == ktg::CertOutcome::Error) return kExitIo;
      return report.all_certified() ? kExitOk : kExitUnknown;
    }
  } catch (const ktg::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitIo;
}
