#pragma once

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "torchlight/qubo.hpp"
#include "torchlight/solvers.hpp"

namespace torchlight {

struct AdmmConfig {
  double mu0 = 0.01;
  double rho = 1.1;
  int budget = 30;     // fixed number of x-step solves; the only stop rule
  double gamma = 1.0;  // step-function weight; no runtime effect with the
                       // closed-form z update, kept for config completeness
  SolverConfig solver;
  bool early_exit = false;  // stop once feasible with a stable torch count
};

struct AdmmState {
  std::vector<int> x;
  std::vector<int> z;
  std::vector<double> lambda;
  double mu = 0.0;
  int iteration = 0;
};

struct TraceRow {
  int iteration = 0;  // 1-based
  int torches = 0;
  int violations = 0;
  double primal_residual = 0.0;
  double mu = 0.0;  // the value used by this iteration's x-step
  double energy = 0.0;
};

using IterationTrace = std::vector<TraceRow>;

struct AdmmResult {
  AdmmState state;
  IterationTrace trace;
  std::vector<std::vector<int>> iterates;  // x after each iteration
  // Fewest-torch iterate with zero violations, when one occurred; ADMM
  // iterates are not monotone in feasibility, so the last iterate may be
  // worse than an earlier feasible one.
  std::optional<std::vector<int>> best_feasible;
};

/// c(x, z) = Dx - 1 - z.
inline std::vector<double> residual(const LinearConstraintSystem& c, const std::vector<int>& x,
                                    const std::vector<int>& z) {
  if (static_cast<int>(z.size()) != c.n()) {
    throw std::invalid_argument("z length does not match constraint system");
  }
  auto dx = c.coverage().times(x);
  std::vector<double> r(dx.size());
  for (std::size_t i = 0; i < dx.size(); ++i) {
    r[i] = static_cast<double>(dx[i]) - 1.0 - static_cast<double>(z[i]);
  }
  return r;
}

/// Closed-form z step: z = max{0, Dx - 1} element-wise.
inline std::vector<int> update_z(const LinearConstraintSystem& c, const std::vector<int>& x) {
  auto dx = c.coverage().times(x);
  std::vector<int> z(dx.size());
  for (std::size_t i = 0; i < dx.size(); ++i) z[i] = std::max(0, dx[i] - 1);
  return z;
}

/// lambda' = lambda + mu * c(x, z).
inline std::vector<double> update_multipliers(const AdmmState& state,
                                              const LinearConstraintSystem& c) {
  auto r = residual(c, state.x, state.z);
  std::vector<double> lambda(state.lambda);
  if (lambda.size() != r.size()) {
    throw std::invalid_argument("lambda length does not match constraint system");
  }
  for (std::size_t i = 0; i < r.size(); ++i) lambda[i] += state.mu * r[i];
  return lambda;
}

/// Residual-balancing penalty update with fixed rate rho.
inline double update_mu(double mu_k, double rho, double primal, double dual_like) {
  if (!(mu_k > 0.0) || !(rho >= 1.0)) {
    throw std::invalid_argument("update_mu requires mu > 0 and rho >= 1");
  }
  if (primal > 10.0 * mu_k * dual_like) return rho * mu_k;
  if (dual_like > 10.0 * mu_k * primal) return mu_k / rho;
  return mu_k;
}

namespace detail {

inline double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline int count_violations(const LinearConstraintSystem& c, const std::vector<int>& x) {
  auto dx = c.coverage().times(x);
  int count = 0;
  for (int v : dx) {
    if (v < 1) ++count;
  }
  return count;
}

}  // namespace detail

/// Runs the alternating loop: QUBO x-step, closed-form z-step, multiplier
/// and penalty updates, for exactly cfg.budget iterations (unless the
/// opt-in early exit triggers). The previous iterate warm-starts each
/// solver call.
inline AdmmResult run_admm(const LinearConstraintSystem& c, const AdmmConfig& cfg) {
  if (cfg.budget < 1) throw std::invalid_argument("budget must be at least 1");
  if (!(cfg.mu0 > 0.0)) throw std::invalid_argument("mu0 must be positive");
  if (!(cfg.rho >= 1.0)) throw std::invalid_argument("rho must be at least 1");
  const int n = c.n();

  AdmmState s;
  s.x.assign(static_cast<std::size_t>(n), 0);
  s.z.assign(static_cast<std::size_t>(n), 0);
  s.lambda.assign(static_cast<std::size_t>(n), 0.0);
  s.mu = cfg.mu0;

  AdmmResult result;
  int best_feasible_torches = std::numeric_limits<int>::max();

  for (int it = 1; it <= cfg.budget; ++it) {
    const double mu_used = s.mu;
    QuboInstance q = build_admm_step_qubo(c, s.z, s.lambda, s.mu);
    SolverConfig solver_cfg = cfg.solver;
    solver_cfg.seed = mix_seed(cfg.solver.seed, static_cast<std::uint64_t>(it));
    SolveResult solved = solve(q, solver_cfg, &s.x);
    s.x = solved.x;

    std::vector<int> z_prev = std::move(s.z);
    s.z = update_z(c, s.x);
    auto r = residual(c, s.x, s.z);
    s.lambda = update_multipliers(s, c);

    // Residual balancing between ||c|| and the z block's dual residual
    // mu * ||D(z_prev - z)||. With the raw z change in place of the dual
    // residual, the penalty collapses during the placement phase.
    std::vector<int> dz(z_prev.size());
    for (std::size_t i = 0; i < z_prev.size(); ++i) dz[i] = z_prev[i] - s.z[i];
    const double primal = detail::norm2(r);
    const double dual = s.mu * detail::norm2(c.transpose_times(dz));
    if (primal > 10.0 * dual) {
      s.mu *= cfg.rho;
    } else if (dual > 10.0 * primal) {
      s.mu /= cfg.rho;
    }
    s.iteration = it;

    TraceRow row;
    row.iteration = it;
    row.torches = 0;
    for (int b : s.x) row.torches += b;
    row.violations = detail::count_violations(c, s.x);
    row.primal_residual = primal;
    row.mu = mu_used;
    row.energy = solved.energy;
    result.trace.push_back(row);
    result.iterates.push_back(s.x);

    if (row.violations == 0 && row.torches < best_feasible_torches) {
      best_feasible_torches = row.torches;
      result.best_feasible = s.x;
    }

    if (cfg.early_exit && result.trace.size() >= 3) {
      const auto& t = result.trace;
      const std::size_t k = t.size();
      bool stable = true;
      for (std::size_t j = k - 3; j < k; ++j) {
        if (t[j].violations != 0 || t[j].torches != t[k - 1].torches) stable = false;
      }
      if (stable) break;
    }
  }

  result.state = std::move(s);
  return result;
}

inline void write_trace_csv(std::ostream& out, const IterationTrace& trace) {
  out << "iteration,torches,violations,primal_residual,mu,energy\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& row : trace) {
    out << row.iteration << ',' << row.torches << ',' << row.violations << ','
        << row.primal_residual << ',' << row.mu << ',' << row.energy << '\n';
  }
}

}  // namespace torchlight
