#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <future>
#include <limits>
#include <stdexcept>
#include <vector>

#include "torchlight/qubo.hpp"
#include "torchlight/rng.hpp"

namespace torchlight {

enum class SolverKind { SA, Tabu, TabuSA, Exhaustive };

struct SaParams {
  int sweeps = 1000;
  double beta_start = 0.1;
  double beta_end = 10.0;
  int restarts = 10;
};

struct TabuParams {
  int max_iterations = 0;  // 0: 50 * n
  int tenure = 0;          // 0: min(20, n/4)
  int restarts = 5;
};

struct SolverConfig {
  SolverKind kind = SolverKind::TabuSA;
  std::uint64_t seed = 1;
  SaParams sa;
  TabuParams tabu;
};

struct SolveResult {
  std::vector<int> x;
  double energy = 0.0;
  long long evaluations = 0;  // single-flip gain evaluations
};

namespace detail {

// Current assignment plus the energy change of every single-bit flip,
// updated incrementally: flipping i touches only gains of its coupled
// variables.
class FlipSearch {
 public:
  explicit FlipSearch(const QuboInstance& q) : q_(q), adj_(static_cast<std::size_t>(q.n())) {
    for (int i = 0; i < q.n(); ++i) {
      for (const auto& [j, v] : q.upper_row(i)) {
        adj_[static_cast<std::size_t>(i)].push_back({j, v});
        adj_[static_cast<std::size_t>(j)].push_back({i, v});
      }
    }
  }

  void reset(const std::vector<int>& x) {
    x_ = x;
    energy_ = torchlight::energy(q_, x_);
    gain_.assign(x_.size(), 0.0);
    for (int i = 0; i < q_.n(); ++i) {
      double field = q_.diagonal(i);
      for (const auto& [j, v] : adj_[static_cast<std::size_t>(i)]) {
        if (x_[static_cast<std::size_t>(j)] != 0) field += v;
      }
      gain_[static_cast<std::size_t>(i)] =
          (x_[static_cast<std::size_t>(i)] != 0 ? -field : field);
    }
  }

  double gain(int i) const { return gain_[static_cast<std::size_t>(i)]; }
  double energy() const { return energy_; }
  const std::vector<int>& x() const { return x_; }

  void flip(int i) {
    const double delta_x = x_[static_cast<std::size_t>(i)] != 0 ? -1.0 : 1.0;
    energy_ += gain_[static_cast<std::size_t>(i)];
    x_[static_cast<std::size_t>(i)] ^= 1;
    gain_[static_cast<std::size_t>(i)] = -gain_[static_cast<std::size_t>(i)];
    for (const auto& [j, v] : adj_[static_cast<std::size_t>(i)]) {
      const double sign_j = x_[static_cast<std::size_t>(j)] != 0 ? -1.0 : 1.0;
      gain_[static_cast<std::size_t>(j)] += sign_j * v * delta_x;
    }
  }

 private:
  const QuboInstance& q_;
  std::vector<std::vector<std::pair<int, double>>> adj_;
  std::vector<int> x_;
  std::vector<double> gain_;
  double energy_ = 0.0;
};

inline bool lex_less(const std::vector<int>& a, const std::vector<int>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

inline std::vector<int> random_assignment(int n, Rng& rng) {
  std::vector<int> x(static_cast<std::size_t>(n));
  for (auto& b : x) b = rng.coin() ? 1 : 0;
  return x;
}

inline void check_config(const SolverConfig& cfg) {
  if (cfg.sa.sweeps < 1 || cfg.sa.restarts < 1) {
    throw std::invalid_argument("SA sweeps/restarts must be positive");
  }
  if (!(cfg.sa.beta_start < cfg.sa.beta_end) || !(cfg.sa.beta_start > 0.0)) {
    throw std::invalid_argument("SA schedule requires 0 < beta_start < beta_end");
  }
  if (cfg.tabu.max_iterations < 0 || cfg.tabu.tenure < 0 || cfg.tabu.restarts < 1) {
    throw std::invalid_argument("tabu parameters out of range");
  }
}

// Enumerates all 2^n assignments along a Gray code so every step is one
// incremental flip. Ties go to the lexicographically smallest assignment.
inline SolveResult exhaustive_solve(const QuboInstance& q) {
  const int n = q.n();
  if (n > 25) throw std::length_error("exhaustive solver is limited to 25 variables");
  FlipSearch s(q);
  s.reset(std::vector<int>(static_cast<std::size_t>(n), 0));

  std::vector<int> best_x = s.x();
  double best_e = s.energy();  // all-zeros has energy 0 by definition
  long long evals = 0;
  const std::uint32_t states = 1u << n;
  for (std::uint32_t t = 1; t < states; ++t) {
    s.flip(std::countr_zero(t));
    ++evals;
    if (s.energy() < best_e) {
      best_e = s.energy();
      best_x = s.x();
    } else if (s.energy() == best_e && lex_less(s.x(), best_x)) {
      best_x = s.x();
    }
  }
  return SolveResult{best_x, torchlight::energy(q, best_x), evals};
}

inline SolveResult sa_solve(const QuboInstance& q, const SolverConfig& cfg,
                            const std::vector<int>* warm_start) {
  const int n = q.n();
  FlipSearch s(q);
  std::vector<int> best_x;
  double best_e = std::numeric_limits<double>::infinity();
  long long evals = 0;

  for (int r = 0; r < cfg.sa.restarts; ++r) {
    Rng rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(r)));
    const bool use_warm = r == 0 && warm_start != nullptr &&
                          static_cast<int>(warm_start->size()) == n;
    s.reset(use_warm ? *warm_start : random_assignment(n, rng));
    if (s.energy() < best_e) {
      best_e = s.energy();
      best_x = s.x();
    }
    for (int sweep = 0; sweep < cfg.sa.sweeps; ++sweep) {
      const double beta =
          cfg.sa.sweeps == 1
              ? cfg.sa.beta_start
              : cfg.sa.beta_start * std::pow(cfg.sa.beta_end / cfg.sa.beta_start,
                                             static_cast<double>(sweep) / (cfg.sa.sweeps - 1));
      for (int i = 0; i < n; ++i) {
        const double d = s.gain(i);
        ++evals;
        if (d <= 0.0 || rng.unit() < std::exp(-beta * d)) {
          s.flip(i);
          if (s.energy() < best_e) {
            best_e = s.energy();
            best_x = s.x();
          }
        }
      }
    }
  }
  return SolveResult{best_x, torchlight::energy(q, best_x), evals};
}

// Steepest single-flip tabu search with aspiration on new global bests.
inline SolveResult tabu_solve(const QuboInstance& q, const SolverConfig& cfg,
                              const std::vector<int>* warm_start) {
  const int n = q.n();
  const int iterations = cfg.tabu.max_iterations > 0 ? cfg.tabu.max_iterations : 50 * n;
  const int tenure = cfg.tabu.tenure > 0 ? cfg.tabu.tenure : std::min(20, std::max(1, n / 4));
  FlipSearch s(q);
  std::vector<int> best_x;
  double best_e = std::numeric_limits<double>::infinity();
  long long evals = 0;
  std::vector<int> tabu_until(static_cast<std::size_t>(n));

  for (int r = 0; r < cfg.tabu.restarts; ++r) {
    Rng rng(mix_seed(cfg.seed, 0x7ab0u + static_cast<std::uint64_t>(r)));
    const bool use_warm = r == 0 && warm_start != nullptr &&
                          static_cast<int>(warm_start->size()) == n;
    s.reset(use_warm ? *warm_start : random_assignment(n, rng));
    if (s.energy() < best_e) {
      best_e = s.energy();
      best_x = s.x();
    }
    std::fill(tabu_until.begin(), tabu_until.end(), -1);
    for (int it = 0; it < iterations; ++it) {
      int pick = -1;
      double pick_gain = std::numeric_limits<double>::infinity();
      for (int i = 0; i < n; ++i) {
        const double g = s.gain(i);
        const bool is_tabu = tabu_until[static_cast<std::size_t>(i)] > it;
        if (is_tabu && !(s.energy() + g < best_e)) continue;
        if (g < pick_gain) {  // strict: ties keep the lowest index
          pick_gain = g;
          pick = i;
        }
      }
      evals += n;
      if (pick < 0) {
        // Everything tabu and nothing aspirates; fall back to the best move.
        for (int i = 0; i < n; ++i) {
          if (s.gain(i) < pick_gain) {
            pick_gain = s.gain(i);
            pick = i;
          }
        }
      }
      s.flip(pick);
      tabu_until[static_cast<std::size_t>(pick)] = it + tenure;
      if (s.energy() < best_e) {
        best_e = s.energy();
        best_x = s.x();
      }
    }
  }
  return SolveResult{best_x, torchlight::energy(q, best_x), evals};
}

}  // namespace detail

/// Best-of-two portfolio: SA and tabu race concurrently on seeds derived
/// from cfg.seed; ties go to SA. evaluations reports the combined work.
inline SolveResult solve_hybrid(const QuboInstance& q, const SolverConfig& cfg,
                                const std::vector<int>* warm_start = nullptr) {
  if (cfg.kind != SolverKind::TabuSA) {
    throw std::invalid_argument("solve_hybrid requires the TabuSA solver kind");
  }
  detail::check_config(cfg);
  SolverConfig sa_cfg = cfg;
  sa_cfg.kind = SolverKind::SA;
  sa_cfg.seed = mix_seed(cfg.seed, 0x5au);
  SolverConfig tabu_cfg = cfg;
  tabu_cfg.kind = SolverKind::Tabu;
  tabu_cfg.seed = mix_seed(cfg.seed, 0x7bu);

  auto tabu_future = std::async(std::launch::async, [&q, &tabu_cfg, warm_start] {
    return detail::tabu_solve(q, tabu_cfg, warm_start);
  });
  SolveResult sa = detail::sa_solve(q, sa_cfg, warm_start);
  SolveResult tabu = tabu_future.get();

  SolveResult out = tabu.energy < sa.energy ? tabu : sa;
  out.evaluations = sa.evaluations + tabu.evaluations;
  return out;
}

/// Minimizes the QUBO energy. Deterministic given (q, cfg.seed); the
/// optional warm start becomes one of the restart initializations.
inline SolveResult solve(const QuboInstance& q, const SolverConfig& cfg,
                         const std::vector<int>* warm_start = nullptr) {
  detail::check_config(cfg);
  switch (cfg.kind) {
    case SolverKind::Exhaustive:
      return detail::exhaustive_solve(q);
    case SolverKind::SA:
      return detail::sa_solve(q, cfg, warm_start);
    case SolverKind::Tabu:
      return detail::tabu_solve(q, cfg, warm_start);
    case SolverKind::TabuSA:
      return solve_hybrid(q, cfg, warm_start);
  }
  throw std::logic_error("unknown solver kind");
}

}  // namespace torchlight
