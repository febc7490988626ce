#pragma once

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "torchlight/geometry.hpp"

namespace torchlight {

/// Upper-triangular QUBO weight matrix; the energy of a binary vector x is
/// sum_{i<=j} Q_ij x_i x_j. Entries with i > j do not exist.
class QuboInstance {
 public:
  explicit QuboInstance(int n)
      : diag_(static_cast<std::size_t>(n), 0.0), upper_(static_cast<std::size_t>(n)) {
    if (n < 1) throw std::invalid_argument("QUBO needs at least one variable");
  }

  int n() const { return static_cast<int>(diag_.size()); }

  void add(int i, int j, double value) {
    if (i < 0 || j < i || j >= n()) {
      throw std::invalid_argument("QUBO entries must satisfy 0 <= i <= j < n");
    }
    if (!std::isfinite(value)) throw std::invalid_argument("QUBO entries must be finite");
    if (i == j) {
      diag_[static_cast<std::size_t>(i)] += value;
      return;
    }
    auto& row = upper_[static_cast<std::size_t>(i)];
    auto it = std::lower_bound(row.begin(), row.end(), j,
                               [](const auto& e, int col) { return e.first < col; });
    if (it != row.end() && it->first == j) {
      it->second += value;
    } else {
      row.insert(it, {j, value});
    }
  }

  double diagonal(int i) const { return diag_[static_cast<std::size_t>(i)]; }

  // 0 for absent entries and for the lower triangle.
  double at(int i, int j) const {
    if (i > j) return 0.0;
    if (i == j) return diagonal(i);
    const auto& row = upper_[static_cast<std::size_t>(i)];
    auto it = std::lower_bound(row.begin(), row.end(), j,
                               [](const auto& e, int col) { return e.first < col; });
    return (it != row.end() && it->first == j) ? it->second : 0.0;
  }

  // Strictly-upper entries of row i, sorted by column.
  const std::vector<std::pair<int, double>>& upper_row(int i) const {
    return upper_[static_cast<std::size_t>(i)];
  }

 private:
  std::vector<double> diag_;
  std::vector<std::vector<std::pair<int, double>>> upper_;
};

inline double energy(const QuboInstance& q, const std::vector<int>& x) {
  if (static_cast<int>(x.size()) != q.n()) {
    throw std::invalid_argument("assignment length does not match QUBO size");
  }
  double e = 0.0;
  for (int i = 0; i < q.n(); ++i) {
    if (x[static_cast<std::size_t>(i)] == 0) continue;
    e += q.diagonal(i);
    for (const auto& [j, v] : q.upper_row(i)) {
      if (x[static_cast<std::size_t>(j)] != 0) e += v;
    }
  }
  return e;
}

/// Debug/diff text format: "n" on the first line, then one "i j value" line
/// per non-zero entry (0-based, sorted).
inline void write_qubo(std::ostream& out, const QuboInstance& q) {
  out << q.n() << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (int i = 0; i < q.n(); ++i) {
    if (q.diagonal(i) != 0.0) out << i << ' ' << i << ' ' << q.diagonal(i) << '\n';
    for (const auto& [j, v] : q.upper_row(i)) {
      if (v != 0.0) out << i << ' ' << j << ' ' << v << '\n';
    }
  }
}

inline QuboInstance read_qubo(std::istream& in) {
  int n = 0;
  if (!(in >> n)) throw std::runtime_error("qubo text: missing size header");
  QuboInstance q(n);
  int i = 0;
  int j = 0;
  double v = 0.0;
  while (in >> i >> j >> v) q.add(i, j, v);
  return q;
}

/// The set-cover constraint system Dx >= 1 together with the Gram matrix
/// D^T D that the ADMM x-step needs every iteration.
class LinearConstraintSystem {
 public:
  explicit LinearConstraintSystem(CoverageMatrix coverage) : d_(std::move(coverage)) {
    const int n = d_.n();
    std::vector<int> dense(static_cast<std::size_t>(n) * n, 0);
    for (int k = 0; k < n; ++k) {
      const auto& support = d_.row(k);
      for (std::size_t a = 0; a < support.size(); ++a) {
        for (std::size_t b = a; b < support.size(); ++b) {
          ++dense[static_cast<std::size_t>(support[a]) * n + support[b]];
        }
      }
    }
    gram_diag_.resize(static_cast<std::size_t>(n));
    gram_upper_.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      gram_diag_[static_cast<std::size_t>(i)] = dense[static_cast<std::size_t>(i) * n + i];
      for (int j = i + 1; j < n; ++j) {
        int g = dense[static_cast<std::size_t>(i) * n + j];
        if (g != 0) gram_upper_[static_cast<std::size_t>(i)].push_back({j, g});
      }
    }
  }

  int n() const { return d_.n(); }
  const CoverageMatrix& coverage() const { return d_; }

  int gram_diagonal(int i) const { return gram_diag_[static_cast<std::size_t>(i)]; }
  const std::vector<std::pair<int, int>>& gram_upper_row(int i) const {
    return gram_upper_[static_cast<std::size_t>(i)];
  }

  // D^T w; iterating rows of D and scattering into their support is the
  // transpose product regardless of symmetry.
  template <typename T>
  std::vector<double> transpose_times(const std::vector<T>& w) const {
    if (static_cast<int>(w.size()) != n()) {
      throw std::invalid_argument("vector length does not match constraint system");
    }
    std::vector<double> out(static_cast<std::size_t>(n()), 0.0);
    for (int k = 0; k < n(); ++k) {
      double wk = static_cast<double>(w[static_cast<std::size_t>(k)]);
      if (wk == 0.0) continue;
      for (int j : d_.row(k)) out[static_cast<std::size_t>(j)] += wk;
    }
    return out;
  }

 private:
  CoverageMatrix d_;
  std::vector<int> gram_diag_;
  std::vector<std::vector<std::pair<int, int>>> gram_upper_;
};

/// QUBO for the ADMM x-step: up to a constant in x, the energy equals
/// 1'x + lambda'(Dx - 1 - z) + (mu/2)||Dx - 1 - z||^2.
inline QuboInstance build_admm_step_qubo(const LinearConstraintSystem& c,
                                         const std::vector<int>& z,
                                         const std::vector<double>& lambda, double mu) {
  const int n = c.n();
  if (static_cast<int>(z.size()) != n || static_cast<int>(lambda.size()) != n) {
    throw std::invalid_argument("z/lambda length does not match constraint system");
  }
  if (!(mu > 0.0) || !std::isfinite(mu)) throw std::invalid_argument("mu must be positive");

  auto dt_lambda = c.transpose_times(lambda);
  std::vector<int> one_plus_z(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) one_plus_z[i] = 1 + z[i];
  auto dt_w = c.transpose_times(one_plus_z);

  QuboInstance q(n);
  for (int i = 0; i < n; ++i) {
    double qii = 1.0 + dt_lambda[static_cast<std::size_t>(i)] -
                 mu * dt_w[static_cast<std::size_t>(i)] + 0.5 * mu * c.gram_diagonal(i);
    q.add(i, i, qii);
    for (const auto& [j, g] : c.gram_upper_row(i)) q.add(i, j, mu * g);
  }
  return q;
}

/// Slack-variable penalty QUBO over n + sum_i m_i binary variables: x first,
/// then the slack bits row by row. The additive constant beta*n that a pure
/// quadratic form cannot carry is reported alongside, so
/// energy(qubo, y) + constant == 1'x + beta ||Dx - 1 - z(y)||^2.
struct SlackQubo {
  QuboInstance qubo;
  int n;                          // original variables
  std::vector<int> slack_width;   // bits per constraint row
  double constant;

  int total_vars() const { return qubo.n(); }

  int slack_var(int row, int bit) const {
    int base = n;
    for (int r = 0; r < row; ++r) base += slack_width[static_cast<std::size_t>(r)];
    return base + bit;
  }

  std::vector<int> x_part(const std::vector<int>& y) const {
    return std::vector<int>(y.begin(), y.begin() + n);
  }

  std::vector<long long> decode_slack(const std::vector<int>& y) const {
    std::vector<long long> z(slack_width.size(), 0);
    int var = n;
    for (std::size_t r = 0; r < slack_width.size(); ++r) {
      for (int b = 0; b < slack_width[r]; ++b, ++var) {
        if (y[static_cast<std::size_t>(var)] != 0) z[r] += 1ll << b;
      }
    }
    return z;
  }
};

inline SlackQubo build_slack_qubo(const LinearConstraintSystem& c, double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw std::invalid_argument("beta must be positive");
  const int n = c.n();

  // m_i bits represent 0 .. 2^m_i - 1 >= rowsum_i - 1, the largest surplus.
  std::vector<int> widths(static_cast<std::size_t>(n), 0);
  int total = n;
  for (int i = 0; i < n; ++i) {
    int need = c.coverage().row_sum(i) - 1;
    int m = 0;
    while ((1 << m) - 1 < need) ++m;
    widths[static_cast<std::size_t>(i)] = m;
    total += m;
  }

  QuboInstance q(total);
  for (int i = 0; i < n; ++i) q.add(i, i, 1.0);

  int slack_base = n;
  for (int row = 0; row < n; ++row) {
    // Affine form a'y - 1 for this row: coefficient 1 on covering x vars,
    // -2^b on the row's slack bits.
    std::vector<std::pair<int, double>> terms;
    for (int j : c.coverage().row(row)) terms.push_back({j, 1.0});
    for (int b = 0; b < widths[static_cast<std::size_t>(row)]; ++b) {
      terms.push_back({slack_base + b, -static_cast<double>(1 << b)});
    }
    slack_base += widths[static_cast<std::size_t>(row)];

    // beta * (a'y - 1)^2 expanded over binary y, constant beta dropped.
    for (std::size_t a = 0; a < terms.size(); ++a) {
      auto [va, ca] = terms[a];
      q.add(va, va, beta * (ca * ca - 2.0 * ca));
      for (std::size_t b = a + 1; b < terms.size(); ++b) {
        auto [vb, cb] = terms[b];
        if (va <= vb) {
          q.add(va, vb, 2.0 * beta * ca * cb);
        } else {
          q.add(vb, va, 2.0 * beta * ca * cb);
        }
      }
    }
  }
  return SlackQubo{std::move(q), n, std::move(widths), beta * n};
}

/// One linear constraint u'x + v <= 0 from the LogSumExp linearization of
/// the max-based coverage condition. Diagnostic only: the coefficient
/// magnitudes spread exponentially with alpha, which is exactly the
/// instability this formulation documents.
struct LseConstraint {
  std::vector<double> u;
  double v = 0.0;

  bool satisfied(const std::vector<int>& x, double tol = 1e-12) const {
    double acc = v;
    for (std::size_t j = 0; j < u.size(); ++j) {
      if (x[j] != 0) acc += u[j];
    }
    return acc <= tol;
  }
};

inline std::vector<LseConstraint> build_lse_constraints(const Heightmap& map,
                                                        const LightParams& params, double alpha) {
  validate(params);
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  TileIndex tiles(map);
  const int n = tiles.n();
  if (n == 1) {
    // No neighbor to anchor P_1; the lone tile must hold its own torch.
    return {LseConstraint{{-1.0}, 1.0}};
  }

  const double v_common = std::exp(alpha * (params.l_min - params.l_torch)) - n;
  std::vector<LseConstraint> constraints;
  constraints.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto d = detail::floor_block_distances(map, tiles, {i}, -1);
    int nearest = -1;
    for (int j = 0; j < n; ++j) {
      if (j == i || d[static_cast<std::size_t>(j)] < 0) continue;
      if (nearest < 0 || d[static_cast<std::size_t>(j)] < nearest) {
        nearest = d[static_cast<std::size_t>(j)];
      }
    }
    const double p_i = nearest < 0 ? 1.0 : nearest + 1.0;  // isolated tile: any P_i > -inf
    LseConstraint ci;
    ci.u.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      // e^{-alpha * inf} = 0 for unreachable pairs.
      double reach = d[static_cast<std::size_t>(j)] < 0
                         ? 0.0
                         : std::exp(-alpha * d[static_cast<std::size_t>(j)]);
      ci.u[static_cast<std::size_t>(j)] = std::exp(-alpha * p_i) - reach;
    }
    ci.v = v_common;
    constraints.push_back(std::move(ci));
  }
  return constraints;
}

}  // namespace torchlight
