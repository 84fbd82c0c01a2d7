#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "wtl/error.hpp"

namespace wtl {

/// Relative slack used by every inequality check: lhs <= rhs * (1 + kRelTol).
inline constexpr double kRelTol = 1e-9;

/// lhs <= rhs up to the relative tolerance.
inline bool holds_le(double lhs, double rhs, double rel_tol = kRelTol) {
  if (lhs <= rhs) return true;
  return lhs <= rhs + rel_tol * std::abs(rhs);
}

/// Same comparison for logarithms of positive quantities.
inline bool holds_le_log(double log_lhs, double log_rhs, double rel_tol = kRelTol) {
  return log_lhs <= log_rhs + std::log1p(rel_tol);
}

/// ln_+(x) = 1 + ln x.
inline double ln_plus(double x) { return 1.0 + std::log(x); }

/// Target accuracy ε in (0, 1], stored through L = ln(1/ε) so that grids of
/// the form ε = e^{-k} keep ln ε^{-1} exact.
class Epsilon {
public:
  static Epsilon from_value(double eps) {
    if (!(eps > 0.0) || !(eps <= 1.0))
      throw DomainError("epsilon must lie in (0, 1], got " + std::to_string(eps));
    return Epsilon(-std::log(eps));
  }

  static Epsilon from_log_inverse(double log_inv) {
    if (!(log_inv >= 0.0) || !std::isfinite(log_inv))
      throw DomainError("ln(1/epsilon) must be finite and >= 0, got " + std::to_string(log_inv));
    return Epsilon(log_inv);
  }

  double value() const { return std::exp(-log_inv_); }
  double log_inverse() const { return log_inv_; }
  /// 1 + ln ε^{-1}.
  double log_factor() const { return 1.0 + log_inv_; }
  bool is_one() const { return log_inv_ == 0.0; }

  friend bool operator==(const Epsilon&, const Epsilon&) = default;

private:
  explicit Epsilon(double log_inv) : log_inv_(log_inv) {}
  double log_inv_;
};

/// Decimal scientific notation with 17 significant digits.
inline std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

/// Converts a real upper bound on a count into the count, rejecting values
/// a double cannot hold as an exact integer-valued bound.
inline double ceil_count(double real) {
  if (std::isnan(real)) throw RangeError("bound evaluated to NaN");
  if (!std::isfinite(real)) throw RangeError("bound overflows double precision");
  return std::ceil(real);
}

} // namespace wtl
