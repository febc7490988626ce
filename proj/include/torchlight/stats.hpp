#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

namespace torchlight {

struct SeriesStat {
  double mean = 0.0;
  double ci_halfwidth = 0.0;  // 95% Student-t, k-1 degrees of freedom
};

inline SeriesStat mean_ci95(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("mean_ci95 needs at least one value");
  SeriesStat s;
  for (double v : values) s.mean += v;
  s.mean /= static_cast<double>(values.size());
  if (values.size() < 2) return s;  // halfwidth 0 for a single sample

  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  const double k = static_cast<double>(values.size());
  const double stddev = std::sqrt(ss / (k - 1.0));
  boost::math::students_t dist(k - 1.0);
  const double t = boost::math::quantile(dist, 0.975);
  s.ci_halfwidth = t * stddev / std::sqrt(k);
  return s;
}

}  // namespace torchlight
