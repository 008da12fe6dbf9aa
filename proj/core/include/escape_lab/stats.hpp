#pragma once

// Summary statistics for replica outputs. Every accumulator is fed in
// replica-index order by the experiment harness, so floating-point results
// do not depend on which worker finished first.

#include <cstdint>
#include <span>

namespace escape_lab {

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

/// Wilson score interval for a binomial proportion (z = 1.96 by default).
/// Returns [0, 1] when trials == 0.
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 1.959963984540054);

struct Summary {
  std::uint64_t count = 0;
  double mean = 0.0;
  double variance = 0.0;  ///< unbiased sample variance, 0 for count < 2
  double stderr_mean() const noexcept;
  /// Normal-approximation 95% interval for the mean.
  Interval ci95() const noexcept;
};

/// Welford accumulator.
class RunningStats {
 public:
  void add(double x) noexcept;
  Summary summary() const noexcept;
  std::uint64_t count() const noexcept { return n_; }

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

Summary summarize(std::span<const double> xs) noexcept;

/// (observed - expected) / standard error; +-inf when the error is 0 and the values differ.
double z_score(double observed, double expected, double standard_error) noexcept;

}  // namespace escape_lab
