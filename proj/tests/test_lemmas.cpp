#include <cmath>

#include <boost/math/special_functions/gamma.hpp>
#include <gtest/gtest.h>

#include "wtl/oracles.hpp"
#include "wtl/sampler.hpp"
#include "wtl/transfer.hpp"

using namespace wtl;
using namespace wtl::transfer;

TEST(TailSum, DirectExamples) {
  // 30-digit reference: Σ_{k>=10} √k e^{-k} = 2.33415079373915e-4.
  EXPECT_NEAR(tail_sum_direct(1, 1, 9), 2.33415079373915e-4, 1e-17);
  const std::uint64_t n = 500;
  const double first = std::sqrt(n + 1.0) * std::exp(-(n + 1.0));
  EXPECT_LT(tail_sum_direct(1, 1, n), first / (1.0 - std::exp(-1.0)) * 2.0);
  EXPECT_EQ(tail_sum_direct(1, 1, 5000), 0.0);
}

TEST(TailSum, BoundExamples) {
  EXPECT_NEAR(tail_sum_bound(1, 1, 9), 1.5 * 3.0 * std::exp(-9.0), 1e-15);
  EXPECT_NEAR(tail_sum_bound(1, 1, 9), 5.5534e-4, 1e-7);
  EXPECT_GE(tail_sum_bound(1, 1, 9), tail_sum_direct(1, 1, 9));
  EXPECT_NEAR(tail_sum_bound(1, 2, 10), 60.0 * std::exp(-std::sqrt(10.0)), 1e-12);
  EXPECT_NEAR(tail_sum_bound(1, 2, 10), 2.53975317739230, 1e-13);
  EXPECT_GE(tail_sum_bound(1, 2, 10), tail_sum_direct(1, 2, 10));
  try {
    tail_sum_bound(1, 2, 8);
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("max(3B/2,1)"), std::string::npos);
  }
  try {
    tail_sum_bound(10, 4, 100);
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("A(B/2)^B"), std::string::npos);
  }
}

TEST(TailSum, PropertySweep) {
  sampler::Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    const double A = 0.5 + 3.5 * rng.uniform();
    const double B = 0.25 + 2.75 * rng.uniform();
    const double t = std::max(series_integral_threshold(A, B), integral_tail_threshold(A, B));
    const auto n0 = static_cast<std::uint64_t>(std::max(1.0, std::ceil(t)));
    for (std::uint64_t n = n0; n < n0 + 5; ++n)
      EXPECT_TRUE(holds_le(tail_sum_direct(A, B, n), tail_sum_bound(A, B, n))) << A << ' ' << B << ' ' << n;
  }
}

TEST(IncompleteGamma, Examples) {
  EXPECT_NEAR(incomplete_gamma_upper(1, 2), std::exp(-2.0), 1e-16);
  EXPECT_NEAR(oracles::upper_gamma(1, 2), std::exp(-2.0), 1e-16);
  EXPECT_NEAR(incomplete_gamma_upper(3, 4), 48.0 * std::exp(-4.0), 1e-15);
  EXPECT_NEAR(incomplete_gamma_upper(3, 4), 0.879150666659241, 1e-14);
  EXPECT_NEAR(oracles::upper_gamma(3, 4), 26.0 * std::exp(-4.0), 1e-15);
  EXPECT_NEAR(incomplete_gamma_upper(0.5, 4), 0.009158, 1e-6);
  EXPECT_NEAR(oracles::upper_gamma(0.5, 4), 0.00829106938067267, 1e-16);
  EXPECT_THROW(incomplete_gamma_upper(3, 3), DomainError);
  EXPECT_THROW(incomplete_gamma_upper(0.5, 1), DomainError);
}

TEST(IncompleteGamma, OracleAgreesWithBoost) {
  for (double a : {0.3, 0.5, 1.0, 1.5, 2.7, 3.0, 4.5, 7.2})
    for (double x : {1.1, 2.0, 5.0, 13.0, 40.0}) {
      const double reference = boost::math::tgamma(a, x);
      EXPECT_NEAR(oracles::upper_gamma(a, x), reference, 1e-11 * reference) << a << ' ' << x;
      EXPECT_NEAR(oracles::scaled_upper_gamma_quadrature(a, x), reference * std::exp(x), 1e-10 * reference * std::exp(x));
    }
}

TEST(IncompleteGamma, PropertySweep) {
  sampler::Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const double a = 0.05 + 7.95 * rng.uniform();
    const double x = std::max(a, 1.0) * (1.0 + 1e-6) + 40.0 * rng.uniform();
    EXPECT_TRUE(holds_le(oracles::scaled_upper_gamma(a, x), incomplete_gamma_upper_scaled(a, x))) << a << ' ' << x;
  }
}

TEST(PowerExp, Examples) {
  auto p = power_exp_bound(1, 1, 1, 1, 2);
  EXPECT_NEAR(p.lhs, 2.0 * std::exp(-2.0), 1e-15);
  EXPECT_DOUBLE_EQ(p.rhs, 1.0);
  p = power_exp_bound(1, 1, 1, 1, 1);
  EXPECT_NEAR(p.lhs, std::exp(-1.0), 1e-15);
  EXPECT_DOUBLE_EQ(p.rhs, 1.0);
  // x = (n/A)^{1/B} = 1/δ at n = A δ^{-B}: the inequality is strict there.
  const double u = 0.7, delta = 0.4, A = 3.0, B = 1.3;
  p = power_exp_bound(u, delta, A, B, A * std::pow(delta, -B));
  EXPECT_LT(p.lhs, p.rhs);
  EXPECT_THROW(power_exp_bound(0, 1, 1, 1, 1), DomainError);
}

TEST(PowerExp, LogFormMatches) {
  const auto direct = power_exp_bound(0.5, 2.0, 1.5, 0.8, 7.0);
  const auto logs = power_exp_bound_log(0.5, 2.0, 1.5, 0.8, 7.0);
  EXPECT_NEAR(logs.lhs, std::log(direct.lhs), 1e-13);
  EXPECT_NEAR(logs.rhs, std::log(direct.rhs), 1e-13);
}

TEST(PowerExp, PropertySweep) {
  sampler::Rng rng(13);
  auto lu = [&](double lo, double hi) { return std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * rng.uniform()); };
  for (int i = 0; i < 1000; ++i) {
    const double u = lu(0.01, 10), delta = lu(0.01, 10), A = lu(0.01, 100), B = lu(0.05, 10), n = lu(1e-3, 1e6);
    const auto p = power_exp_bound_log(u, delta, A, B, n);
    EXPECT_TRUE(holds_le_log(p.lhs, p.rhs)) << u << ' ' << delta << ' ' << A << ' ' << B << ' ' << n;
  }
}
