#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "torchlight/qubo.hpp"
#include "torchlight/solvers.hpp"

using torchlight::CoverageMatrix;
using torchlight::LinearConstraintSystem;
using torchlight::QuboInstance;

namespace {

LinearConstraintSystem system_for(const torchlight::Heightmap& m) {
  return LinearConstraintSystem(torchlight::coverage_matrix(m));
}

LinearConstraintSystem chain3() {
  return LinearConstraintSystem(CoverageMatrix({{0, 1}, {0, 1, 2}, {1, 2}}));
}

}  // namespace

TEST_CASE("energy of trivial assignments") {
  auto q = oracle::random_qubo(3, 6);
  std::vector<int> zero(6, 0);
  CHECK(torchlight::energy(q, zero) == 0.0);
  for (int i = 0; i < 6; ++i) {
    auto e_i = zero;
    e_i[static_cast<std::size_t>(i)] = 1;
    CHECK(torchlight::energy(q, e_i) == q.diagonal(i));
  }
}

TEST_CASE("energy matches the dense matrix product") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto q = oracle::random_qubo(seed, 8, 0.7);
    auto x = oracle::random_selection(seed + 99, 8, 0.5);
    CHECK_THAT(torchlight::energy(q, x),
               Catch::Matchers::WithinAbs(oracle::dense_energy(q, x), 1e-12));
  }
}

TEST_CASE("energy validates dimensions") {
  auto q = oracle::random_qubo(1, 4);
  CHECK_THROWS_AS(torchlight::energy(q, std::vector<int>(3, 0)), std::invalid_argument);
}

TEST_CASE("instances are upper triangular") {
  QuboInstance q(3);
  q.add(0, 2, 1.5);
  CHECK_THROWS_AS(q.add(2, 0, 1.0), std::invalid_argument);
  CHECK(q.at(2, 0) == 0.0);
  CHECK(q.at(0, 2) == 1.5);
  CHECK_THROWS_AS(q.add(0, 0, std::numeric_limits<double>::infinity()), std::invalid_argument);
}

TEST_CASE("qubo text export round-trips") {
  auto q = oracle::random_qubo(17, 9, 0.4);
  std::ostringstream out;
  torchlight::write_qubo(out, q);
  std::istringstream in(out.str());
  auto back = torchlight::read_qubo(in);
  REQUIRE(back.n() == q.n());
  for (int i = 0; i < q.n(); ++i) {
    for (int j = i; j < q.n(); ++j) CHECK(back.at(i, j) == q.at(i, j));
  }
}

TEST_CASE("x-step weights reduce to the torch count as mu vanishes") {
  auto c = chain3();
  std::vector<int> z(3, 0);
  std::vector<double> lambda(3, 0.0);
  auto q = torchlight::build_admm_step_qubo(c, z, lambda, 1e-12);
  for (int i = 0; i < 3; ++i) {
    CHECK_THAT(q.diagonal(i), Catch::Matchers::WithinAbs(1.0, 1e-9));
    for (int j = i + 1; j < 3; ++j) CHECK_THAT(q.at(i, j), Catch::Matchers::WithinAbs(0.0, 1e-9));
  }
  auto minimum = oracle::brute_min_qubo(q);
  CHECK(minimum.first == std::vector<int>(3, 0));
}

TEST_CASE("x-step energy differences equal Lagrangian differences") {
  for (std::uint64_t seed = 5; seed <= 10; ++seed) {
    auto m = oracle::random_map(seed, 4, 4, 2, 0.25);
    auto c = system_for(m);
    const int n = c.n();
    std::mt19937_64 gen(seed * 7);
    std::vector<int> z(static_cast<std::size_t>(n));
    std::vector<double> lambda(static_cast<std::size_t>(n));
    for (auto& v : z) v = static_cast<int>(gen() % 4);
    for (auto& v : lambda) v = static_cast<double>(gen() % 2000) / 500.0 - 2.0;
    const double mu = 0.37;
    const double gamma = 1.9;  // constant in x; must cancel in differences

    auto q = torchlight::build_admm_step_qubo(c, z, lambda, mu);
    for (int trial = 0; trial < 10; ++trial) {
      auto x1 = oracle::random_selection(seed * 100 + trial, n, 0.4);
      auto x2 = oracle::random_selection(seed * 100 + 50 + trial, n, 0.6);
      double lhs = torchlight::energy(q, x1) - torchlight::energy(q, x2);
      double rhs = oracle::lagrangian(c.coverage(), x1, z, lambda, mu, gamma) -
                   oracle::lagrangian(c.coverage(), x2, z, lambda, mu, gamma);
      CHECK_THAT(lhs, Catch::Matchers::WithinAbs(rhs, 1e-9));
    }
  }
}

TEST_CASE("x-step minimizer equals the Lagrangian minimizer on the 3-chain") {
  auto c = chain3();
  std::vector<int> z(3, 0);
  std::vector<double> lambda(3, 0.0);
  auto q = torchlight::build_admm_step_qubo(c, z, lambda, 1.0);

  auto qubo_best = oracle::brute_min_qubo(q).first;
  std::vector<int> lag_best;
  double lag_best_value = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 0; mask < 8; ++mask) {
    std::vector<int> x = {static_cast<int>(mask & 1), static_cast<int>((mask >> 1) & 1),
                          static_cast<int>((mask >> 2) & 1)};
    double v = oracle::lagrangian(c.coverage(), x, z, lambda, 1.0, 1.0);
    if (v < lag_best_value) {
      lag_best_value = v;
      lag_best = x;
    }
  }
  CHECK(qubo_best == lag_best);
}

TEST_CASE("single-bit flips move energy and Lagrangian in lockstep") {
  auto m = oracle::random_map(31, 4, 5, 3, 0.3);
  auto c = system_for(m);
  const int n = c.n();
  std::vector<int> z(static_cast<std::size_t>(n), 1);
  std::vector<double> lambda(static_cast<std::size_t>(n), -0.25);
  const double mu = 0.8;
  auto q = torchlight::build_admm_step_qubo(c, z, lambda, mu);

  auto x = oracle::random_selection(99, n, 0.5);
  for (int i = 0; i < n; ++i) {
    auto flipped = x;
    flipped[static_cast<std::size_t>(i)] ^= 1;
    double de = torchlight::energy(q, flipped) - torchlight::energy(q, x);
    double dl = oracle::lagrangian(c.coverage(), flipped, z, lambda, mu, 1.0) -
                oracle::lagrangian(c.coverage(), x, z, lambda, mu, 1.0);
    CHECK_THAT(de, Catch::Matchers::WithinAbs(dl, 1e-9));
  }
}

TEST_CASE("x-step validates arguments") {
  auto c = chain3();
  CHECK_THROWS_AS(
      torchlight::build_admm_step_qubo(c, std::vector<int>(2, 0), std::vector<double>(3, 0.0), 1.0),
      std::invalid_argument);
  CHECK_THROWS_AS(
      torchlight::build_admm_step_qubo(c, std::vector<int>(3, 0), std::vector<double>(3, 0.0), 0.0),
      std::invalid_argument);
}

TEST_CASE("slack form of the single-tile instance") {
  auto c = system_for(torchlight::parse_heightmap("0"));
  auto slack = torchlight::build_slack_qubo(c, 2.0);
  CHECK(slack.n == 1);
  REQUIRE(slack.slack_width == std::vector<int>{0});
  CHECK(slack.total_vars() == 1);
  auto best = oracle::brute_min_qubo(slack.qubo);
  CHECK(best.first == std::vector<int>{1});
  CHECK_THAT(torchlight::energy(slack.qubo, {1}) + slack.constant,
             Catch::Matchers::WithinAbs(1.0, 1e-12));
}

TEST_CASE("slack penalty vanishes exactly at encoded feasible points") {
  for (std::uint64_t seed = 40; seed <= 44; ++seed) {
    auto m = oracle::random_map(seed, 3, 3, 2, 0.3, 6);
    auto c = system_for(m);
    const int n = c.n();
    auto slack = torchlight::build_slack_qubo(c, static_cast<double>(n + 1));

    std::vector<int> x(static_cast<std::size_t>(n), 1);  // all-ones is feasible
    auto dx = c.coverage().times(x);
    std::vector<int> y(static_cast<std::size_t>(slack.total_vars()), 0);
    for (int i = 0; i < n; ++i) y[static_cast<std::size_t>(i)] = 1;
    for (int i = 0; i < n; ++i) {
      int zi = dx[static_cast<std::size_t>(i)] - 1;
      REQUIRE(zi >= 0);
      for (int b = 0; b < slack.slack_width[static_cast<std::size_t>(i)]; ++b) {
        if (zi & (1 << b)) y[static_cast<std::size_t>(slack.slack_var(i, b))] = 1;
      }
      REQUIRE((zi < (1 << slack.slack_width[static_cast<std::size_t>(i)]) ||
               slack.slack_width[static_cast<std::size_t>(i)] == 0));
    }
    // With the penalty at zero the objective is exactly the torch count.
    double objective = torchlight::energy(slack.qubo, y) + slack.constant;
    CHECK_THAT(objective, Catch::Matchers::WithinAbs(static_cast<double>(n), 1e-9));
    auto decoded = slack.decode_slack(y);
    for (int i = 0; i < n; ++i) {
      CHECK(decoded[static_cast<std::size_t>(i)] == dx[static_cast<std::size_t>(i)] - 1);
    }
  }
}

TEST_CASE("slack minimizer solves the small cover instances") {
  for (std::uint64_t seed = 50; seed <= 54; ++seed) {
    auto m = oracle::random_map(seed, 2, 3, 2, 0.25, 4);
    auto c = system_for(m);
    const int n = c.n();
    REQUIRE(n <= 4);
    auto slack = torchlight::build_slack_qubo(c, static_cast<double>(n + 1));
    REQUIRE(slack.total_vars() <= 14);

    auto best = oracle::brute_min_qubo(slack.qubo).first;
    auto x = slack.x_part(best);
    auto dx = c.coverage().times(x);
    for (int v : dx) CHECK(v >= 1);

    std::vector<std::vector<int>> subsets;
    for (int i = 0; i < n; ++i) subsets.push_back(c.coverage().row(i));
    int optimum = oracle::brute_min_cover_size(subsets, n);
    int torches = 0;
    for (int b : x) torches += b;
    CHECK(torches == optimum);
  }
}

TEST_CASE("lse constraints on the short corridor track coverage signs") {
  auto m = fixtures::corridor3();
  auto d = torchlight::coverage_matrix(m);
  auto constraints = torchlight::build_lse_constraints(m, {}, 10.0);
  REQUIRE(constraints.size() == 3);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      // Everything is within covering distance on this fixture and the
      // corresponding coefficients are non-positive.
      CHECK(d.at(i, j));
      CHECK(constraints[static_cast<std::size_t>(i)].u[static_cast<std::size_t>(j)] <= 1e-15);
    }
  }
}

TEST_CASE("covering assignments satisfy the lse constraints") {
  for (double alpha : {1.0, 5.0, 10.0}) {
    for (std::uint64_t seed = 60; seed <= 62; ++seed) {
      auto m = oracle::random_map(seed, 5, 5, 2, 0.25);
      auto d = torchlight::coverage_matrix(m);
      auto constraints = torchlight::build_lse_constraints(m, {}, alpha);
      for (int trial = 0; trial < 6; ++trial) {
        auto x = oracle::random_selection(seed * 31 + trial, d.n(), 0.3);
        auto dx = d.times(x);
        for (int i = 0; i < d.n(); ++i) {
          if (dx[static_cast<std::size_t>(i)] < 1) x[static_cast<std::size_t>(i)] = 1;
        }
        for (const auto& constraint : constraints) CHECK(constraint.satisfied(x));
      }
    }
  }
}

TEST_CASE("all-ones satisfies every lse constraint") {
  auto m = oracle::random_map(77, 4, 6, 3, 0.3);
  auto constraints = torchlight::build_lse_constraints(m, {}, 5.0);
  std::vector<int> ones(constraints.front().u.size(), 1);
  for (const auto& constraint : constraints) CHECK(constraint.satisfied(ones));
}

TEST_CASE("lse single-tile instance forces the only torch") {
  auto m = torchlight::parse_heightmap("0");
  auto constraints = torchlight::build_lse_constraints(m, {}, 3.0);
  REQUIRE(constraints.size() == 1);
  CHECK(constraints[0].satisfied({1}));
  CHECK_FALSE(constraints[0].satisfied({0}));
}

TEST_CASE("lse handles unreachable pairs as zero contribution") {
  auto m = torchlight::parse_heightmap("0 # 0");
  auto constraints = torchlight::build_lse_constraints(m, {}, 4.0);
  REQUIRE(constraints.size() == 2);
  // The far tile term reduces to e^{-alpha P_i} exactly.
  CHECK_THAT(constraints[0].u[1], Catch::Matchers::WithinAbs(std::exp(-4.0), 1e-15));
}
