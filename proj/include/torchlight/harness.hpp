#pragma once

#include <cstdint>
#include <future>
#include <iomanip>
#include <limits>
#include <ostream>
#include <thread>
#include <vector>

#include "torchlight/admm.hpp"
#include "torchlight/stats.hpp"

namespace torchlight {

/// Aggregate over k independent, seeded repetitions of the same solve.
struct ExperimentReport {
  int repetitions = 0;
  std::vector<SeriesStat> torches_by_iteration;
  std::vector<SeriesStat> violations_by_iteration;
  std::vector<std::vector<int>> final_selections;  // chosen layout per run
  std::vector<int> final_violations;               // of the chosen layout
};

/// Chosen answer of one run: the best feasible iterate when one exists,
/// the last iterate otherwise.
inline const std::vector<int>& chosen_selection(const AdmmResult& r) {
  return r.best_feasible ? *r.best_feasible : r.state.x;
}

/// Runs k repetitions with per-run derived seeds, at most `workers` at a
/// time (each hybrid solve occupies two threads by itself).
inline std::vector<AdmmResult> run_repeats(const LinearConstraintSystem& c, const AdmmConfig& cfg,
                                           int repeats, int workers = 0) {
  if (repeats < 1) throw std::invalid_argument("repeats must be positive");
  if (workers < 1) {
    unsigned hw = std::thread::hardware_concurrency();
    workers = std::max(1, static_cast<int>(hw / 2));
  }
  std::vector<AdmmResult> results(static_cast<std::size_t>(repeats));
  std::vector<std::future<void>> inflight;
  for (int run = 0; run < repeats; ++run) {
    AdmmConfig run_cfg = cfg;
    run_cfg.solver.seed = mix_seed(cfg.solver.seed, 0xA110u + static_cast<std::uint64_t>(run));
    inflight.push_back(std::async(std::launch::async, [&c, run_cfg, run, &results] {
      results[static_cast<std::size_t>(run)] = run_admm(c, run_cfg);
    }));
    if (static_cast<int>(inflight.size()) >= workers) {
      inflight.front().get();
      inflight.erase(inflight.begin());
    }
  }
  for (auto& f : inflight) f.get();
  return results;
}

inline ExperimentReport make_report(const LinearConstraintSystem& c,
                                    const std::vector<AdmmResult>& runs) {
  ExperimentReport report;
  report.repetitions = static_cast<int>(runs.size());
  std::size_t iterations = 0;
  for (const auto& r : runs) iterations = std::max(iterations, r.trace.size());
  for (std::size_t it = 0; it < iterations; ++it) {
    std::vector<double> torches;
    std::vector<double> violations;
    for (const auto& r : runs) {
      if (it < r.trace.size()) {
        torches.push_back(static_cast<double>(r.trace[it].torches));
        violations.push_back(static_cast<double>(r.trace[it].violations));
      }
    }
    report.torches_by_iteration.push_back(mean_ci95(torches));
    report.violations_by_iteration.push_back(mean_ci95(violations));
  }
  for (const auto& r : runs) {
    const auto& x = chosen_selection(r);
    report.final_selections.push_back(x);
    report.final_violations.push_back(detail::count_violations(c, x));
  }
  return report;
}

inline void write_report_csv(std::ostream& out, const ExperimentReport& report) {
  out << "iteration,torches_mean,torches_ci95,violations_mean,violations_ci95\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t it = 0; it < report.torches_by_iteration.size(); ++it) {
    const auto& t = report.torches_by_iteration[it];
    const auto& v = report.violations_by_iteration[it];
    out << (it + 1) << ',' << t.mean << ',' << t.ci_halfwidth << ',' << v.mean << ','
        << v.ci_halfwidth << '\n';
  }
}

}  // namespace torchlight
