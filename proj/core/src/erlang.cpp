#include "escape_lab/erlang.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "escape_lab/errors.hpp"

namespace escape_lab {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_args(std::uint64_t n, double rate, double t) {
  if (n == 0) throw DomainError("Erlang shape n must be >= 1");
  if (!(rate > 0.0)) throw DomainError("Erlang rate must be > 0, got " + std::to_string(rate));
  if (!(t >= 0.0)) throw DomainError("Erlang argument t must be >= 0, got " + std::to_string(t));
}

double log_poisson_pmf(double k, double x) { return -x + k * std::log(x) - std::lgamma(k + 1.0); }

// log sum_{k >= n} pmf(k), valid (fast and cancellation-free) when x < n.
// Successive terms shrink by x / (k + 1) < 1.
double log_upper_tail_below_mean(std::uint64_t n, double x) {
  const double nd = static_cast<double>(n);
  double sum = 1.0;
  double term = 1.0;
  for (double k = nd + 1.0;; k += 1.0) {
    term *= x / k;
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return log_poisson_pmf(nd, x) + std::log(sum);
}

// log sum_{k < n} pmf(k), valid when x >= n. Summed downward from k = n-1;
// successive terms shrink by k / x < 1.
double log_lower_sum_above_mean(std::uint64_t n, double x) {
  const double top = static_cast<double>(n - 1);
  double sum = 1.0;
  double term = 1.0;
  for (double k = top; k > 0.0; k -= 1.0) {
    term *= k / x;
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return log_poisson_pmf(top, x) + std::log(sum);
}

double log1m_exp(double log_p) {
  // log(1 - e^{log_p}) for log_p <= 0.
  if (log_p > -0.6931471805599453) return std::log(-std::expm1(log_p));
  return std::log1p(-std::exp(log_p));
}

}  // namespace

double log_erlang_cdf(std::uint64_t n, double rate, double t) {
  check_args(n, rate, t);
  const double x = rate * t;
  if (x == 0.0) return kNegInf;
  if (std::isinf(x)) return 0.0;
  if (x < static_cast<double>(n)) return log_upper_tail_below_mean(n, x);
  return log1m_exp(log_lower_sum_above_mean(n, x));
}

double log_erlang_sf(std::uint64_t n, double rate, double t) {
  check_args(n, rate, t);
  const double x = rate * t;
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return kNegInf;
  if (x >= static_cast<double>(n)) return log_lower_sum_above_mean(n, x);
  return log1m_exp(log_upper_tail_below_mean(n, x));
}

double erlang_cdf(std::uint64_t n, double rate, double t) { return std::exp(log_erlang_cdf(n, rate, t)); }

double erlang_sf(std::uint64_t n, double rate, double t) { return std::exp(log_erlang_sf(n, rate, t)); }

}  // namespace escape_lab
