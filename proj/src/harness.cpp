#include "ktg/harness.hpp"

#include <atomic>
#include <chrono>
#include <thread>

#include <json.hpp>

namespace ktg {

CertResult certify_invariance(const GraphDiagram& d, const MoveInstance& m, const RuleSet& rs,
                              const HarnessBudget& budget) {
  CertResult res;
  try {
    GraphDiagram moved = apply_move(d, m);
    auto before = bracket(d, rs, budget.normalize_steps, budget.workers);
    auto after = bracket(moved, rs, budget.normalize_steps, budget.workers);
    res.before = before.sum;
    res.after = after.sum;
    auto eq = equivalent(before.sum, after.sum, rs, budget.equiv);
    res.explored = eq.explored;
    if (eq.outcome == EquivOutcome::Equal) {
      res.outcome = CertOutcome::Certified;
      res.cert = std::move(eq.cert);
    } else {
      res.outcome = CertOutcome::Unknown;
    }
  } catch (const std::exception& e) {
    res.outcome = CertOutcome::Error;
    res.error = e.what();
  }
  return res;
}

bool SweepReport::all_certified() const {
  for (const auto& c : cells)
    if (c.outcome != CertOutcome::Certified) return false;
  return true;
}

SweepReport sweep(const std::vector<std::pair<std::string, GraphDiagram>>& corpus,
                  const RuleSet& rs, const std::vector<MoveKind>& kinds,
                  const HarnessBudget& budget) {
  SweepReport report;
  report.ruleset = rs.name;

  struct Job {
    size_t cell;
    const GraphDiagram* diagram;
    MoveInstance move;
  };
  std::vector<Job> jobs;
  for (const auto& [name, d] : corpus) {
    report.corpus.push_back(name);
    for (MoveKind kind : kinds) {
      for (MoveDir dir : {MoveDir::Apply, MoveDir::Inverse}) {
        if (kind == MoveKind::Identity && dir == MoveDir::Inverse) continue;
        auto sites = enumerate_move_sites(d, kind, -1, dir);
        for (size_t i = 0; i < sites.size(); ++i) {
          SweepCell cell;
          cell.diagram = name;
          cell.kind = kind;
          cell.dir = dir;
          cell.variant = sites[i].variant;
          cell.site = static_cast<int>(i);
          cell.site_desc = sites[i].to_string();
          jobs.push_back({report.cells.size(), &d, sites[i]});
          report.cells.push_back(std::move(cell));
        }
      }
    }
  }

  auto run_job = [&](const Job& job) {
    auto start = std::chrono::steady_clock::now();
    // Single-worker brackets inside sweep cells; parallelism is across cells.
    HarnessBudget cell_budget = budget;
    cell_budget.workers = 1;
    CertResult r = certify_invariance(*job.diagram, job.move, rs, cell_budget);
    auto& cell = report.cells[job.cell];
    cell.outcome = r.outcome;
    cell.trace_steps = r.cert.length();
    cell.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  };

  int workers = std::max(1, budget.workers);
  if (workers == 1 || jobs.size() <= 1) {
    for (const auto& job : jobs) run_job(job);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&]() {
        for (;;) {
          size_t i = next.fetch_add(1);
          if (i >= jobs.size()) return;
          run_job(jobs[i]);
        }
      });
    for (auto& t : pool) t.join();
  }
  return report;
}

std::string sweep_report_json(const SweepReport& report, bool deterministic) {
  nlohmann::ordered_json j;
  j["ruleset"] = report.ruleset;
  j["corpus"] = report.corpus;
  j["all_certified"] = report.all_certified();
  nlohmann::ordered_json cells = nlohmann::ordered_json::array();
  size_t certified = 0, unknown = 0, error = 0;
  for (const auto& c : report.cells) {
    nlohmann::ordered_json e;
    e["diagram"] = c.diagram;
    e["move"] = move_kind_name(c.kind);
    e["direction"] = c.dir == MoveDir::Apply ? "apply" : "inverse";
    e["variant"] = variant_name(c.kind, c.variant);
    e["site"] = c.site;
    e["site_desc"] = c.site_desc;
    e["outcome"] = c.outcome == CertOutcome::Certified ? "certified"
                   : c.outcome == CertOutcome::Unknown ? "unknown"
                                                       : "error";
    e["trace_steps"] = c.trace_steps;
    if (!deterministic) e["wall_ms"] = c.wall_ms;
    cells.push_back(std::move(e));
    (c.outcome == CertOutcome::Certified  ? certified
     : c.outcome == CertOutcome::Unknown ? unknown
                                         : error)++;
  }
  j["cells"] = std::move(cells);
  j["summary"] = {{"total", report.cells.size()},
                  {"certified", certified},
                  {"unknown", unknown},
                  {"error", error}};
  return j.dump(2) + "\n";
}

}  // namespace ktg
