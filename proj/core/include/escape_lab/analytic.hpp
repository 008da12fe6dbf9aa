#pragma once

// Closed-form large-deviation rate functions for Richardson growth and for
// the two-type escape process on the homogeneous tree, with the root finders
// for their zero sets and exact Erlang-based expectations that the
// asymptotic exponents are checked against.

#include <cstdint>
#include <optional>

#include "escape_lab/tree.hpp"

namespace escape_lab {

/// Tree degree parameter plus the type-2 spread rate. Requires lambda > 1.
class ModelParams {
 public:
  ModelParams(int d, double lambda);
  ModelParams(TreeParams tree, double lambda);

  const TreeParams& tree() const noexcept { return tree_; }
  int d() const noexcept { return tree_.d(); }
  double lambda() const noexcept { return lambda_; }

 private:
  TreeParams tree_;
  double lambda_;
};

struct SpeedPair {
  double a = 0.0;  ///< occupation speed, 0 < a < 1
  double b = 0.0;  ///< invasion speed, b > 1
  double residual_a = 0.0;
  double residual_b = 0.0;
};

struct SurvivalBand {
  double r1 = 0.0;
  double r2 = 0.0;
  double residual_r1 = 0.0;
  double residual_r2 = 0.0;
};

struct ProfileMinimum {
  double c0 = 0.0;
  double g_min = 0.0;
};

struct RootOptions {
  double tol = 1e-10;
  int max_iterations = 200;
};

/// 1/c - log(1/c) - 1 - log d. Throws DomainError for c <= 0.
double rate_function_f(double c, int d);

/// Growth profile g(c); equals f(c) for c >= lambda.
double growth_profile_g(double c, const ModelParams& p);

/// (2d-1) + sqrt((2d-1)^2 - 1), the lambda > 1 solving (lambda+1)^2 = 4 lambda d.
double lambda_critical(int d);

/// c0 = (lambda+1)/2 and g(c0) = log((lambda+1)^2 / (4 lambda d)).
ProfileMinimum profile_minimizer(const ModelParams& p);

/// Both roots of f(c) = 0 by bracketed bisection.
SpeedPair richardson_speeds(int d, RootOptions opts = {});

/// The two roots of g(c) = 0 when g(c0) < 0, nullopt when g(c0) > 0.
/// Throws DomainError when |g(c0)| <= tol: the critical case is not decided.
std::optional<SurvivalBand> escape_band(const ModelParams& p, RootOptions opts = {});

/// Exact E N_n(n/c) for a Richardson process at `rate`: |C_n| * P(Gamma(n, rate) <= n/c).
double expected_occupied(std::uint64_t n, double c, const TreeParams& p, double rate = 1.0);
double log_expected_occupied(std::uint64_t n, double c, const TreeParams& p, double rate = 1.0);

/// Exact E F_n(n/c) for the rate-1 process: |C_n| * P(Gamma(n, 1) > n/c).
double expected_vacant(std::uint64_t n, double c, const TreeParams& p);
double log_expected_vacant(std::uint64_t n, double c, const TreeParams& p);

/// u_n(n/c) = P(x_n reached by the rate-1 process and not by the independent
/// rate-lambda process by time n/c).
double exclusive_probability_u(std::uint64_t n, double c, const ModelParams& p);
double log_exclusive_probability_u(std::uint64_t n, double c, const ModelParams& p);

/// E V_n(n/c) = |C_n| u_n(n/c).
double expected_exclusive(std::uint64_t n, double c, const ModelParams& p);
double log_expected_exclusive(std::uint64_t n, double c, const ModelParams& p);

}  // namespace escape_lab
