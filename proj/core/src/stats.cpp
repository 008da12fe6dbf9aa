#include "escape_lab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace escape_lab {

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {successes == 0 ? 0.0 : std::max(0.0, centre - half),
          successes == trials ? 1.0 : std::min(1.0, centre + half)};
}

double Summary::stderr_mean() const noexcept {
  return count > 0 ? std::sqrt(variance / static_cast<double>(count)) : 0.0;
}

Interval Summary::ci95() const noexcept {
  const double h = 1.959963984540054 * stderr_mean();
  return {mean - h, mean + h};
}

void RunningStats::add(double x) noexcept {
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

Summary RunningStats::summary() const noexcept {
  Summary s;
  s.count = n_;
  s.mean = mean_;
  s.variance = n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
  return s;
}

Summary summarize(std::span<const double> xs) noexcept {
  RunningStats acc;
  for (double x : xs) acc.add(x);
  return acc.summary();
}

double z_score(double observed, double expected, double standard_error) noexcept {
  const double diff = observed - expected;
  if (standard_error > 0.0) return diff / standard_error;
  if (diff == 0.0) return 0.0;
  return diff > 0.0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
}

}  // namespace escape_lab
