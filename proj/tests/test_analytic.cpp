#include <gtest/gtest.h>

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "escape_lab/analytic.hpp"
#include "escape_lab/erlang.hpp"
#include "escape_lab/errors.hpp"

using namespace escape_lab;

TEST(Erlang, MatchesBoostRegularisedGamma) {
  for (std::uint64_t n : {1u, 2u, 5u, 12u, 40u, 150u}) {
    for (double rate : {0.5, 1.0, 2.0, 12.0}) {
      for (double t : {0.01, 0.3, 1.0, 4.0, 8.0, 25.0, 100.0}) {
        const double x = rate * t;
        const double p = boost::math::gamma_p(static_cast<double>(n), x);
        const double q = boost::math::gamma_q(static_cast<double>(n), x);
        ASSERT_NEAR(erlang_cdf(n, rate, t), p, 1e-13 + 1e-11 * p) << n << ' ' << rate << ' ' << t;
        ASSERT_NEAR(erlang_sf(n, rate, t), q, 1e-13 + 1e-11 * q) << n << ' ' << rate << ' ' << t;
        if (p > 1e-300) {
          ASSERT_NEAR(log_erlang_cdf(n, rate, t), std::log(p), 1e-9);
        }
      }
    }
  }
}

TEST(Erlang, OracleValues) {
  EXPECT_NEAR(erlang_cdf(10, 1.0, 8.0), 0.28337574127298903, 1e-14);
  EXPECT_NEAR(1536.0 * erlang_cdf(10, 1.0, 8.0), 435.26513859531116, 1e-10);
}

TEST(Erlang, EdgeCases) {
  EXPECT_EQ(erlang_cdf(3, 1.0, 0.0), 0.0);
  EXPECT_EQ(erlang_sf(3, 1.0, 0.0), 1.0);
  EXPECT_NEAR(erlang_cdf(1, 2.0, 1.5), 1.0 - std::exp(-3.0), 1e-15);
  EXPECT_THROW(erlang_cdf(0, 1.0, 1.0), DomainError);
  EXPECT_THROW(erlang_cdf(2, 0.0, 1.0), DomainError);
  EXPECT_THROW(erlang_cdf(2, 1.0, -1.0), DomainError);
  // Far tail stays finite in log space where the plain value underflows.
  const double lp = log_erlang_cdf(2000, 1.0, 2000.0 / 3.0);
  EXPECT_TRUE(std::isfinite(lp));
  EXPECT_LT(lp, -700.0);
}

TEST(Erlang, MonotoneInTimeAndShape) {
  for (std::uint64_t n = 1; n <= 30; ++n) {
    double prev = 0.0;
    for (double t = 0.0; t <= 40.0; t += 0.25) {
      const double p = erlang_cdf(n, 1.3, t);
      ASSERT_GE(p, prev);
      ASSERT_LE(p, 1.0);
      prev = p;
      ASSERT_GE(erlang_cdf(n, 1.3, t), erlang_cdf(n + 1, 1.3, t));
    }
  }
}

TEST(RateFunction, ShapeAndRoots) {
  const auto s = richardson_speeds(2);
  EXPECT_NEAR(s.a, 0.3733646177016741, 1e-10);
  EXPECT_NEAR(s.b, 4.311070407001004, 1e-10);
  EXPECT_LE(std::abs(s.residual_a), 1e-10);
  EXPECT_LE(std::abs(s.residual_b), 1e-10);
  const auto s3 = richardson_speeds(3);
  EXPECT_NEAR(s3.a, 0.3040177698304006, 1e-10);
  EXPECT_NEAR(s3.b, 7.0807869147395985, 1e-10);

  // Minimum at c = 1 with value -log d; decreasing below, increasing above.
  EXPECT_NEAR(rate_function_f(1.0, 2), -std::log(2.0), 1e-15);
  for (double c = 0.05; c < 1.0; c += 0.05) EXPECT_GT(rate_function_f(c, 2), rate_function_f(c + 0.05, 2));
  for (double c = 1.0; c < 10.0; c += 0.25) EXPECT_LT(rate_function_f(c, 2), rate_function_f(c + 0.25, 2));
  EXPECT_THROW(rate_function_f(0.0, 2), DomainError);
  EXPECT_THROW(rate_function_f(-1.0, 2), DomainError);
}

TEST(ModelParams, Validation) {
  EXPECT_THROW(ModelParams(2, 1.0), DomainError);
  EXPECT_THROW(ModelParams(2, 0.5), DomainError);
  EXPECT_THROW(ModelParams(1, 2.0), DomainError);
  EXPECT_THROW(ModelParams(2, std::nan("")), DomainError);
  EXPECT_NO_THROW(ModelParams(2, 1.0001));
}

TEST(CriticalValue, Formula) {
  EXPECT_NEAR(lambda_critical(2), 5.8284271247, 1e-9);
  EXPECT_NEAR(lambda_critical(3), 9.8989794856, 1e-9);
  EXPECT_THROW(lambda_critical(1), DomainError);
  for (int d = 2; d <= 10; ++d) {
    const double l = lambda_critical(d);
    EXPECT_NEAR((l + 1) * (l + 1), 4 * l * d, 1e-9 * l * l);
  }
}

TEST(GrowthProfile, MinimumAndContinuity) {
  for (int d : {2, 3, 4, 5}) {
    for (double lambda : {1.5, 2.0, 4.0, 8.0, 20.0}) {
      const ModelParams p(d, lambda);
      const auto m = profile_minimizer(p);
      EXPECT_DOUBLE_EQ(m.c0, (lambda + 1) / 2);
      EXPECT_NEAR(growth_profile_g(m.c0, p), m.g_min, 1e-12);
      for (double c : {1.0, lambda}) {
        const double left = growth_profile_g(std::nextafter(c, 0.0), p);
        const double right = growth_profile_g(std::nextafter(c, 2 * c), p);
        EXPECT_NEAR(left, right, 1e-12);
      }
      for (double c = 0.1; c < 3 * lambda; c += 0.1) EXPECT_GE(growth_profile_g(c, p), m.g_min - 1e-12);
      // Equal to the Richardson rate function beyond lambda.
      EXPECT_NEAR(growth_profile_g(2 * lambda, p), rate_function_f(2 * lambda, d), 1e-15);
    }
  }
}

TEST(GrowthProfile, SurvivalBand) {
  const ModelParams p(2, 2.0);
  const auto band = escape_band(p);
  ASSERT_TRUE(band.has_value());
  EXPECT_NEAR(band->r1, 0.7467292354035165, 1e-9);
  EXPECT_NEAR(band->r2, 4.311070407000868, 1e-9);
  EXPECT_LE(std::abs(band->residual_r1), 1e-10);
  EXPECT_LE(std::abs(band->residual_r2), 1e-10);
  EXPECT_NEAR(profile_minimizer(ModelParams(2, 5.0)).g_min, -0.10536051565782628, 1e-14);
  EXPECT_NEAR(profile_minimizer(ModelParams(2, 8.0)).g_min, 0.2355660713127669, 1e-14);

  EXPECT_FALSE(escape_band(ModelParams(2, 8.0)).has_value());
  EXPECT_THROW(escape_band(ModelParams(2, lambda_critical(2))), DomainError);
}

TEST(Expectations, OracleValues) {
  const TreeParams p(2);
  EXPECT_NEAR(expected_occupied(12, 1.5, p), 687.661062257778, 1e-8);
  EXPECT_NEAR(expected_vacant(12, 0.8, p), 1135.1150532030347, 1e-8);
  EXPECT_NEAR(expected_vacant(10, 0.8, p), 309.3981771963432, 1e-8);
  EXPECT_NEAR(expected_exclusive(10, 1.2, ModelParams(2, 2.0)), 15.501200776091189, 1e-9);
  // N + F = |C_n| in expectation.
  for (double c : {0.3, 0.8, 1.5, 4.0}) {
    EXPECT_NEAR(expected_occupied(9, c, p) + expected_vacant(9, c, p), 768.0, 1e-8);
  }
}

TEST(Expectations, RateScaling) {
  const TreeParams p(3);
  // A rate-r process at time n/c is the rate-1 process at time r n / c.
  for (double r : {0.5, 2.0, 7.0}) {
    EXPECT_NEAR(expected_occupied(8, 1.3, p, r), expected_occupied(8, 1.3 / r, p, 1.0), 1e-9);
  }
}

TEST(Expectations, ExclusiveBelowOccupiedAndProfileBound) {
  for (double lambda : {1.01, 2.0, 5.0}) {
    const ModelParams mp(2, lambda);
    for (std::uint64_t n : {5u, 20u, 80u}) {
      for (double c : {0.5, 1.0, 1.5, 3.0, 6.0}) {
        EXPECT_LE(expected_exclusive(n, c, mp), expected_occupied(n, c, mp.tree()) * (1 + 1e-12));
        // E V_n(n/c) <= exp(-n g(c)) * |C_n| / d^n  (Chernoff bound on both factors).
        const double bound = -static_cast<double>(n) * growth_profile_g(c, mp) + std::log(1.5);
        EXPECT_LE(log_expected_exclusive(n, c, mp), bound + 1e-9) << lambda << ' ' << n << ' ' << c;
      }
    }
  }
}

TEST(Expectations, ExponentConvergesToRateFunction) {
  const TreeParams p(2);
  for (double c : {1.5, 2.0, 3.0}) {
    double prev = std::numeric_limits<double>::infinity();
    for (std::uint64_t n : {100u, 500u, 2000u}) {
      const double err = std::abs(log_expected_occupied(n, c, p) / static_cast<double>(n) + rate_function_f(c, 2));
      EXPECT_LT(err, prev);
      prev = err;
    }
    EXPECT_LE(prev, 0.05);
  }
}

TEST(Expectations, Superadditivity) {
  const ModelParams mp(2, 2.0);
  for (double c : {0.5, 1.0, 1.5, 2.0, 5.0}) {
    for (std::uint64_t m = 1; m <= 30; ++m) {
      for (std::uint64_t n = 1; n <= 30; ++n) {
        ASSERT_LE(log_exclusive_probability_u(m, c, mp) + log_exclusive_probability_u(n, c, mp),
                  log_exclusive_probability_u(m + n, c, mp));
      }
    }
  }
}
