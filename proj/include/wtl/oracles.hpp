#pragma once

// Reference values computed by routes independent of the bounds they check.

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "wtl/error.hpp"

namespace wtl::oracles {

namespace detail {

inline bool is_integer(double a) { return a == std::floor(a) && a < 64.0; }
inline bool is_half_integer(double a) { return is_integer(a - 0.5) && a > 0.0; }

/// Γ(n, x) e^x = (n-1)! Σ_{k<n} x^k / k!.
inline double scaled_gamma_integer(int n, double x) {
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < n; ++k) {
    term *= x / k;
    sum += term;
  }
  return std::tgamma(static_cast<double>(n)) * sum;
}

/// Γ(m + 1/2, x) e^x through Γ(1/2, x) = √π erfc(√x) and
/// Γ(a+1, x) = a Γ(a, x) + x^a e^{-x}.
inline double scaled_gamma_half_integer(double a, double x) {
  const double sx = std::sqrt(x);
  // erfc(√x) e^x underflows late enough for the x ranges used here.
  double g = std::sqrt(std::numbers::pi) * std::erfc(sx) * std::exp(x);
  for (double s = 0.5; s < a; s += 1.0) g = s * g + std::pow(x, s);
  return g;
}

} // namespace detail

/// Γ(a, x) e^x by quadrature of ∫_0^∞ (x + s)^{a-1} e^{-s} ds.
inline double scaled_upper_gamma_quadrature(double a, double x) {
  if (!(a > 0.0) || !(x > 0.0)) throw DomainError("incomplete gamma oracle needs a > 0, x > 0");
  boost::math::quadrature::exp_sinh<double> integrator;
  double err = 0.0;
  double l1 = 0.0;
  const double value = integrator.integrate([&](double s) {
        if (!std::isfinite(s)) return 0.0;
        return std::exp((a - 1.0) * std::log(x + s) - s);
      },
                                            0.0, std::numeric_limits<double>::infinity(), 1e-13, &err, &l1);
  if (!(err <= 1e-10 * std::abs(value)))
    throw BudgetError("incomplete gamma quadrature missed its 1e-10 relative target");
  return value;
}

/// Γ(a, x) e^x: closed forms for integer and half-integer a, quadrature otherwise.
inline double scaled_upper_gamma(double a, double x) {
  if (!(a > 0.0) || !(x > 0.0)) throw DomainError("incomplete gamma oracle needs a > 0, x > 0");
  if (detail::is_integer(a)) return detail::scaled_gamma_integer(static_cast<int>(a), x);
  if (detail::is_half_integer(a) && x < 600.0) return detail::scaled_gamma_half_integer(a, x);
  return scaled_upper_gamma_quadrature(a, x);
}

/// Γ(a, x) = ∫_x^∞ v^{a-1} e^{-v} dv.
inline double upper_gamma(double a, double x) { return scaled_upper_gamma(a, x) * std::exp(-x); }

} // namespace wtl::oracles
