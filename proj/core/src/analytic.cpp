#include "escape_lab/analytic.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "escape_lab/erlang.hpp"
#include "escape_lab/errors.hpp"

namespace escape_lab {
namespace {

// x - log x - 1, the Cramer rate of a mean-one exponential sum evaluated at x.
double cramer(double x) { return x - std::log(x) - 1.0; }

void require_positive_speed(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw DomainError("speed c must be finite and > 0, got " + std::to_string(c));
  }
}

void require_level(std::uint64_t n) {
  if (n == 0) throw DomainError("level n must be >= 1");
}

// Bisection on a bracket where fn(lo) and fn(hi) have opposite signs. Runs to
// machine resolution (bounded by max_iterations); the residual is reported,
// not used as the stopping rule.
template <typename Fn>
double bisect(Fn fn, double lo, double hi, const RootOptions& opts) {
  double f_lo = fn(lo);
  for (int i = 0; i < opts.max_iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = fn(mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return std::abs(fn(lo)) <= std::abs(fn(hi)) ? lo : hi;
}

// Walk down from `start` by halving until fn > 0; fn is assumed to blow up at 0+.
template <typename Fn>
double expand_down(Fn fn, double start) {
  double lo = start;
  for (int i = 0; i < 2000 && !(fn(lo) > 0.0); ++i) lo *= 0.5;
  return lo;
}

template <typename Fn>
double expand_up(Fn fn, double start) {
  double hi = start;
  for (int i = 0; i < 2000 && !(fn(hi) > 0.0); ++i) hi *= 2.0;
  return hi;
}

}  // namespace

ModelParams::ModelParams(int d, double lambda) : ModelParams(TreeParams{d}, lambda) {}

ModelParams::ModelParams(TreeParams tree, double lambda) : tree_(tree), lambda_(lambda) {
  if (!(lambda > 1.0) || !std::isfinite(lambda)) {
    throw DomainError("type-2 rate lambda must be finite and > 1, got " + std::to_string(lambda));
  }
}

double rate_function_f(double c, int d) {
  require_positive_speed(c);
  if (d < 1) throw DomainError("d must be >= 1");
  return cramer(1.0 / c) - std::log(static_cast<double>(d));
}

double growth_profile_g(double c, const ModelParams& p) {
  require_positive_speed(c);
  const double lambda = p.lambda();
  const double log_d = std::log(static_cast<double>(p.d()));
  if (c <= 1.0) return cramer(lambda / c) - log_d;
  if (c < lambda) return cramer(lambda / c) + cramer(1.0 / c) - log_d;
  return cramer(1.0 / c) - log_d;
}

double lambda_critical(int d) {
  if (d < 2) throw DomainError("lambda_critical requires d >= 2, got " + std::to_string(d));
  const double k = 2.0 * d - 1.0;
  return k + std::sqrt(k * k - 1.0);
}

ProfileMinimum profile_minimizer(const ModelParams& p) {
  const double lambda = p.lambda();
  const double c0 = 0.5 * (lambda + 1.0);
  const double g_min = std::log((lambda + 1.0) * (lambda + 1.0) / (4.0 * lambda * p.d()));
  return {c0, g_min};
}

SpeedPair richardson_speeds(int d, RootOptions opts) {
  if (d < 2) throw DomainError("richardson_speeds requires d >= 2");
  if (!(opts.tol > 0.0)) throw DomainError("root tolerance must be > 0");
  auto f = [d](double c) { return rate_function_f(c, d); };
  const double lo = expand_down(f, 0.5);
  const double hi = expand_up(f, 2.0);
  SpeedPair out;
  out.a = bisect(f, lo, 1.0, opts);
  out.b = bisect(f, 1.0, hi, opts);
  out.residual_a = f(out.a);
  out.residual_b = f(out.b);
  return out;
}

std::optional<SurvivalBand> escape_band(const ModelParams& p, RootOptions opts) {
  if (!(opts.tol > 0.0)) throw DomainError("root tolerance must be > 0");
  const auto [c0, g_min] = profile_minimizer(p);
  if (std::abs(g_min) <= opts.tol) {
    throw DomainError("lambda = " + std::to_string(p.lambda()) +
                      " is critical within tolerance (g(c0) = " + std::to_string(g_min) +
                      "); the survival band is undetermined");
  }
  if (g_min > 0.0) return std::nullopt;
  auto g = [&p](double c) { return growth_profile_g(c, p); };
  const double lo = expand_down(g, 0.5 * c0);
  const double hi = expand_up(g, 2.0 * c0);
  SurvivalBand band;
  band.r1 = bisect(g, lo, c0, opts);
  band.r2 = bisect(g, c0, hi, opts);
  band.residual_r1 = g(band.r1);
  band.residual_r2 = g(band.r2);
  return band;
}

double log_expected_occupied(std::uint64_t n, double c, const TreeParams& p, double rate) {
  require_level(n);
  require_positive_speed(c);
  return log_sphere_size(n, p) + log_erlang_cdf(n, rate, static_cast<double>(n) / c);
}

double expected_occupied(std::uint64_t n, double c, const TreeParams& p, double rate) {
  return std::exp(log_expected_occupied(n, c, p, rate));
}

double log_expected_vacant(std::uint64_t n, double c, const TreeParams& p) {
  require_level(n);
  require_positive_speed(c);
  return log_sphere_size(n, p) + log_erlang_sf(n, 1.0, static_cast<double>(n) / c);
}

double expected_vacant(std::uint64_t n, double c, const TreeParams& p) {
  return std::exp(log_expected_vacant(n, c, p));
}

double log_exclusive_probability_u(std::uint64_t n, double c, const ModelParams& p) {
  require_level(n);
  require_positive_speed(c);
  const double t = static_cast<double>(n) / c;
  return log_erlang_cdf(n, 1.0, t) + log_erlang_sf(n, p.lambda(), t);
}

double exclusive_probability_u(std::uint64_t n, double c, const ModelParams& p) {
  return std::exp(log_exclusive_probability_u(n, c, p));
}

double log_expected_exclusive(std::uint64_t n, double c, const ModelParams& p) {
  return log_sphere_size(n, p.tree()) + log_exclusive_probability_u(n, c, p);
}

double expected_exclusive(std::uint64_t n, double c, const ModelParams& p) {
  return std::exp(log_expected_exclusive(n, c, p));
}

}  // namespace escape_lab
