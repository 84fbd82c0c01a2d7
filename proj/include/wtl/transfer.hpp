#pragma once

// Converting a poly-logarithmic bound on the linear-information complexity
// n^all(ε) <= A (1 + ln ε^{-1})^B into bounds on widths and on the
// standard-information complexity n^std-lin(ε), with every constant explicit.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "wtl/error.hpp"
#include "wtl/model_spaces.hpp"
#include "wtl/numeric.hpp"

namespace wtl::transfer {

/// (A, B) with n^all(ε) <= A (1 + ln ε^{-1})^B.
struct ComplexityProfile {
  double A;
  double B;

  void validate() const {
    if (!(A >= 1.0) || !std::isfinite(A)) throw DomainError("profile needs A >= 1, got A=" + format_real(A));
    if (!(B > 0.0) || !std::isfinite(B)) throw DomainError("profile needs B > 0, got B=" + format_real(B));
  }
};

/// Universal constants whose values are only known to exist: b from the
/// sampling-width inequality (for exponent r) and D from the weak transfer.
struct BoundConstants {
  std::uint64_t b = 1;
  double r = 1.0;
  double D = 1.0;
  /// True while any of the values is a placeholder default rather than a
  /// proven constant.
  bool idealized = true;

  void validate() const {
    if (b < 1) throw DomainError("constant b must be >= 1");
    if (!(r > 0.0 && r < 2.0)) throw DomainError("exponent r must lie in (0,2), got " + format_real(r));
    if (!(D > 0.0)) throw DomainError("constant D must be > 0, got " + format_real(D));
  }
};

// ---------------------------------------------------------------------------
// Complexity <-> Gelfand widths

/// e·exp(-(n/A)^{1/B}), an upper bound on c_⌊n⌋ when the profile holds.
inline double gelfand_bound_from_profile(const ComplexityProfile& p, double n) {
  p.validate();
  if (!(n >= p.A))
    throw DomainError("Gelfand bound only holds for n >= A (n=" + format_real(n) + ", A=" + format_real(p.A) + ")");
  return std::exp(1.0 - std::pow(n / p.A, 1.0 / p.B));
}

/// A (1 + ln ε^{-1})^B + 1 before rounding up.
inline double complexity_bound_from_gelfand_real(const ComplexityProfile& p, Epsilon eps) {
  p.validate();
  return p.A * std::pow(eps.log_factor(), p.B) + 1.0;
}

/// Upper bound on n^all(ε) implied by c_n <= e·exp(-(n/A)^{1/B}).
inline double complexity_bound_from_gelfand(const ComplexityProfile& p, Epsilon eps) {
  return ceil_count(complexity_bound_from_gelfand_real(p, eps));
}

// ---------------------------------------------------------------------------
// Width inequalities

/// a_n <= (1 + √n) c_n.
inline double pietsch_bound(double c_value, std::uint64_t n) {
  if (!(c_value >= 0.0)) throw DomainError("Gelfand width must be nonnegative");
  if (n < 1) throw DomainError("Pietsch bound needs n >= 1");
  return (1.0 + std::sqrt(static_cast<double>(n))) * c_value;
}

struct DkuResult {
  std::uint64_t index;  ///< b·n, the number of sample points
  double value;         ///< ((1/n) Σ_{k>=n} a_k^r)^{1/r}
  std::size_t terms;    ///< summands used
};

inline constexpr double kTailStopRatio = 1e-17;
inline constexpr std::size_t kTailTermCap = 100'000'000;

namespace detail {

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) comp_ += (sum_ - t) + x;
    else comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline DkuResult dku_finish(double tail, std::size_t terms, std::uint64_t n, const BoundConstants& c) {
  const double mean = tail / static_cast<double>(n);
  const double value = c.r == 1.0 ? mean : std::pow(mean, 1.0 / c.r);
  return DkuResult{c.b * n, value, terms};
}

} // namespace detail

/// Sampling-width bound e_{bn} <= ((1/n) Σ_{k>=n} a_k^r)^{1/r} for a_k given
/// as a function of k. The tail is summed until a term drops below 1e-17 of
/// the partial sum.
inline DkuResult dku_bound(const std::function<double(std::uint64_t)>& a, std::uint64_t n,
                           const BoundConstants& consts) {
  consts.validate();
  if (n < 2) throw DomainError("sampling-width inequality needs n >= 2");
  detail::CompensatedSum sum;
  for (std::size_t i = 0; i < kTailTermCap; ++i) {
    const double ak = a(n + i);
    if (!(ak >= 0.0)) throw DomainError("linear widths must be nonnegative");
    const double term = consts.r == 1.0 ? ak : std::pow(ak, consts.r);
    sum.add(term);
    if (term <= kTailStopRatio * sum.value()) return detail::dku_finish(sum.value(), i + 1, n, consts);
  }
  throw DivergenceError("tail sum of a_k^r did not converge within " + std::to_string(kTailTermCap) + " terms");
}

/// Same bound from a stored sequence (index 0 holds a_0). Running out of
/// stored entries before the stopping rule fires is an error.
inline DkuResult dku_bound(const spaces::WidthSequence& a, std::uint64_t n, const BoundConstants& consts) {
  consts.validate();
  if (a.kind() == spaces::WidthKind::sampling_linear)
    throw DomainError("sampling-width inequality takes linear (or Hilbert Gelfand) widths");
  if (n < 2) throw DomainError("sampling-width inequality needs n >= 2");
  detail::CompensatedSum sum;
  const auto& v = a.values();
  for (std::size_t k = n; k < v.size(); ++k) {
    const double term = consts.r == 1.0 ? v[k] : std::pow(v[k], consts.r);
    sum.add(term);
    if (term <= kTailStopRatio * sum.value()) return detail::dku_finish(sum.value(), k - n + 1, n, consts);
  }
  throw TruncationError("stored widths end at index " + std::to_string(v.size() - 1) +
                        " before the tail sum from n=" + std::to_string(n) + " converged");
}

// ---------------------------------------------------------------------------
// Poly-logarithmic transfer with explicit constant

inline void require_r_one(const BoundConstants& consts) {
  consts.validate();
  if (consts.r != 1.0)
    throw UnsupportedError("the explicit transfer constant is stated for r = 1 only, got r=" + format_real(consts.r));
}

/// C = 3 b A (ln(36A)(1 + B^3))^B.
inline double theorem_main1_constant(const ComplexityProfile& p, const BoundConstants& consts) {
  p.validate();
  require_r_one(consts);
  return 3.0 * static_cast<double>(consts.b) * p.A * std::pow(std::log(36.0 * p.A) * (1.0 + p.B * p.B * p.B), p.B);
}

/// C (1 + ln ε^{-1})^B before rounding up.
inline double n_std_bound_real(const ComplexityProfile& p, const BoundConstants& consts, Epsilon eps) {
  if (!(eps.log_inverse() > 0.0)) throw DomainError("n_std bound needs epsilon in (0,1)");
  return theorem_main1_constant(p, consts) * std::pow(eps.log_factor(), p.B);
}

/// Upper bound on n^std-lin(ε) (and hence n^std(ε)).
inline double n_std_bound(const ComplexityProfile& p, const BoundConstants& consts, Epsilon eps) {
  return ceil_count(n_std_bound_real(p, consts, eps));
}

/// ln of n_std_bound_real, finite where the bound itself overflows.
inline double log_n_std_bound_real(const ComplexityProfile& p, const BoundConstants& consts, Epsilon eps) {
  p.validate();
  require_r_one(consts);
  if (!(eps.log_inverse() > 0.0)) throw DomainError("n_std bound needs epsilon in (0,1)");
  return std::log(3.0 * static_cast<double>(consts.b)) + std::log(p.A) +
         p.B * std::log(std::log(36.0 * p.A) * (1.0 + p.B * p.B * p.B)) + p.B * std::log(eps.log_factor());
}

/// n_0(A,B) = A max(3B/2, 1)^B + 1: from here on the tail-sum estimate applies.
inline double proof_threshold_n0(const ComplexityProfile& p) {
  p.validate();
  return p.A * std::pow(std::max(1.5 * p.B, 1.0), p.B) + 1.0;
}

/// B_0 = max(B/2, 1).
inline double proof_B0(const ComplexityProfile& p) {
  p.validate();
  return std::max(p.B / 2.0, 1.0);
}

/// R = ln 36 + (ln A)/2 + (B_0 + 1) ln B_0.
inline double proof_R(const ComplexityProfile& p) {
  const double B0 = proof_B0(p);
  return std::log(36.0) + std::log(p.A) / 2.0 + (B0 + 1.0) * std::log(B0);
}

/// 3b A B_0^B R^B, the sharper constant the argument actually produces
/// before it is relaxed to theorem_main1_constant.
inline double proof_constant(const ComplexityProfile& p, const BoundConstants& consts) {
  require_r_one(consts);
  return 3.0 * static_cast<double>(consts.b) * p.A * std::pow(proof_B0(p) * proof_R(p), p.B);
}

/// 36 A^{1/2} B_0^{B_0+1} exp(-((n-1)/A)^{1/B} / B_0), the bound on e_{bn}
/// valid for n >= n_0(A,B).
inline double sampling_error_bound(const ComplexityProfile& p, double n) {
  const double n0 = proof_threshold_n0(p);
  if (!(n >= n0)) throw DomainError("sampling error bound needs n >= n0=" + format_real(n0));
  const double B0 = proof_B0(p);
  return 36.0 * std::sqrt(p.A) * std::pow(B0, B0 + 1.0) * std::exp(-std::pow((n - 1.0) / p.A, 1.0 / p.B) / B0);
}

/// Smallest n (before scaling by b) the argument certifies for accuracy ε:
/// max{A B_0^B ln(36 A^{1/2} B_0^{B_0+1} / ε)^B + 2, n_0}.
inline double proof_sample_count(const ComplexityProfile& p, Epsilon eps) {
  const double B0 = proof_B0(p);
  const double log_term = std::log(36.0 * std::sqrt(p.A) * std::pow(B0, B0 + 1.0)) + eps.log_inverse();
  return std::max(p.A * std::pow(B0, p.B) * std::pow(log_term, p.B) + 2.0, proof_threshold_n0(p));
}

struct BoundRow {
  Epsilon epsilon;
  double n_std_bound;
  double n_std_bound_real;
  double n_all_bound;
};

/// Everything the transfer argument produces for one profile.
struct TransferReport {
  ComplexityProfile profile;
  BoundConstants constants;
  /// c_n <= gelfand_scale · exp(-(n/A)^{1/B}) for n >= A.
  double gelfand_scale;
  /// a_n <= linear_scale · n^{1/2} · exp(-(n/A)^{1/B}) for n >= A.
  double linear_scale;
  double n0;
  double B0;
  double R;
  double C;
  double C_proof;
  std::vector<BoundRow> bound_table;

  double n_std(Epsilon eps) const { return n_std_bound(profile, constants, eps); }
};

inline TransferReport make_transfer_report(const ComplexityProfile& p, const BoundConstants& consts,
                                           const std::vector<Epsilon>& grid) {
  p.validate();
  TransferReport r{p,
                   consts,
                   std::numbers::e,
                   2.0 * std::numbers::e,
                   proof_threshold_n0(p),
                   proof_B0(p),
                   proof_R(p),
                   theorem_main1_constant(p, consts),
                   proof_constant(p, consts),
                   {}};
  r.bound_table.reserve(grid.size());
  for (const auto& eps : grid)
    r.bound_table.push_back(BoundRow{eps, n_std_bound(p, consts, eps), n_std_bound_real(p, consts, eps),
                                     complexity_bound_from_gelfand(p, eps)});
  return r;
}

// ---------------------------------------------------------------------------
// Dimension-dependent transfers

struct TransferValue {
  ComplexityProfile profile;
  double real;
  double count;
};

/// Polynomial family n^all <= c d^q (1 + ln ε^{-1})^p, transferred with
/// A = c d^q + 1, B = p.
inline ComplexityProfile polynomial_profile(double c, double p_exp, double q, std::uint64_t d) {
  if (!(c > 0.0)) throw DomainError("polynomial family needs c > 0");
  if (!(p_exp > 0.0)) throw DomainError("polynomial family needs p > 0");
  if (!(q >= 0.0)) throw DomainError("polynomial family needs q >= 0");
  if (d < 1) throw DomainError("dimension d must be >= 1");
  return ComplexityProfile{c * std::pow(static_cast<double>(d), q) + 1.0, p_exp};
}

inline TransferValue corollary_main_bound(double c, double p_exp, double q, const BoundConstants& consts,
                                          std::uint64_t d, Epsilon eps) {
  const auto profile = polynomial_profile(c, p_exp, q, d);
  const double real = n_std_bound_real(profile, consts, eps);
  return TransferValue{profile, real, ceil_count(real)};
}

/// d^q (1 + ln d)^p (1 + ln ε^{-1})^p.
inline double corollary_shape(double p_exp, double q, std::uint64_t d, Epsilon eps) {
  const double dd = static_cast<double>(d);
  return std::pow(dd, q) * std::pow(ln_plus(dd), p_exp) * std::pow(eps.log_factor(), p_exp);
}

/// Smallest C' with C' d^q (1+ln d)^p (1+ln ε^{-1})^p >= the exact bound on
/// d = 1..32, ε = e^{-k}, k = 0..20.
inline double corollary_display_constant(double c, double p_exp, double q, const BoundConstants& consts) {
  double best = 0.0;
  for (std::uint64_t d = 1; d <= 32; ++d) {
    const auto profile = polynomial_profile(c, p_exp, q, d);
    const double C = theorem_main1_constant(profile, consts);
    for (int k = 0; k <= 20; ++k) {
      const auto eps = Epsilon::from_log_inverse(k);
      best = std::max(best, C * std::pow(eps.log_factor(), p_exp) / corollary_shape(p_exp, q, d, eps));
    }
  }
  return best;
}

/// (e + 1/c)^{1/t} / e; the quasi-polynomial transfer needs d strictly above it.
inline double qpt_threshold(double c, double t) {
  if (!(c > 0.0) || !(t > 0.0)) throw DomainError("quasi-polynomial family needs c > 0 and t > 0");
  return std::pow(std::numbers::e + 1.0 / c, 1.0 / t) / std::numbers::e;
}

/// A = c e^t d^t, B = t (1 + ln d).
inline ComplexityProfile quasi_polynomial_profile(double c, double t, std::uint64_t d) {
  const double threshold = qpt_threshold(c, t);
  const double dd = static_cast<double>(d);
  if (!(dd > threshold))
    throw DomainError("quasi-polynomial transfer needs d > (e + 1/c)^{1/t}/e = " + format_real(threshold) +
                      ", got d=" + std::to_string(d));
  return ComplexityProfile{c * std::exp(t) * std::pow(dd, t), t * ln_plus(dd)};
}

struct QptValue {
  ComplexityProfile profile;
  double log_real;  ///< ln of the un-rounded bound
  double real;      ///< may be +inf when the bound exceeds double range
};

/// Quasi-polynomial transfer along the exact argument path. The count is
/// obtained with ceil_count(real) when finite.
inline QptValue qpt_transfer_bound(double c, double t, const BoundConstants& consts, std::uint64_t d, Epsilon eps) {
  const auto profile = quasi_polynomial_profile(c, t, d);
  return QptValue{profile, log_n_std_bound_real(profile, consts, eps), n_std_bound_real(profile, consts, eps)};
}

/// ln of c exp(t ln_+d (ln_+ ln_+ ε^{-1} + 4 ln(t ln_+ d) + C)).
inline double qpt_display_log_value(double c, double t, std::uint64_t d, Epsilon eps, double C) {
  const double B = t * ln_plus(static_cast<double>(d));
  return std::log(c) + B * (ln_plus(eps.log_factor()) + 4.0 * std::log(B) + C);
}

/// Smallest C making the display form dominate the exact path on the grid
/// of (d, ε) pairs supplied.
inline double calibrate_qpt_display_constant(double c, double t, const BoundConstants& consts,
                                             const std::vector<std::pair<std::uint64_t, Epsilon>>& grid) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& [d, eps] : grid) {
    const auto v = qpt_transfer_bound(c, t, consts, d, eps);
    const double B = v.profile.B;
    const double needed = (v.log_real - std::log(c)) / B - ln_plus(eps.log_factor()) - 4.0 * std::log(B);
    best = std::max(best, needed);
  }
  return best;
}

struct WeakTransferValue {
  double real;
  double count;
  /// max{exp(h v_0), exp(2h d^α)}: the widths estimate is used from here on.
  double premise_threshold;
};

/// D exp(4h((1 + ln ε^{-1})^β + d^α)).
inline WeakTransferValue weak_transfer_bound(double h, std::uint64_t v0, double alpha, double beta,
                                             const BoundConstants& consts, std::uint64_t d, Epsilon eps) {
  consts.validate();
  if (!(h > 0.0 && h <= 1.0 / 16.0)) throw DomainError("weak transfer needs h in (0, 1/16], got " + format_real(h));
  if (!(alpha > 0.0 && alpha <= 1.0) || !(beta > 0.0 && beta <= 1.0))
    throw DomainError("weak transfer needs alpha, beta in (0, 1]");
  if (v0 < 1) throw DomainError("weak transfer needs v0 >= 1");
  if (d < 1) throw DomainError("dimension d must be >= 1");
  if (!(eps.log_inverse() > 0.0)) throw DomainError("weak transfer needs epsilon in (0,1)");
  const double d_alpha = std::pow(static_cast<double>(d), alpha);
  const double real = consts.D * std::exp(4.0 * h * (std::pow(eps.log_factor(), beta) + d_alpha));
  const double premise = std::max(std::exp(h * static_cast<double>(v0)), std::exp(2.0 * h * d_alpha));
  return WeakTransferValue{real, ceil_count(real), premise};
}

// ---------------------------------------------------------------------------
// Auxiliary inequalities behind the tail estimate

/// Σ_{k>=n+1} k^{1/2} exp(-(k/A)^{1/B}), summed term by term.
inline double tail_sum_direct(double A, double B, std::uint64_t n) {
  if (!(A > 0.0) || !(B > 0.0)) throw DomainError("tail sum needs A > 0 and B > 0");
  if (n < 1) throw DomainError("tail sum needs n >= 1");
  const double inv_B = 1.0 / B;
  detail::CompensatedSum sum;
  for (std::size_t i = 0; i < kTailTermCap; ++i) {
    const double k = static_cast<double>(n + 1 + i);
    const double term = std::sqrt(k) * std::exp(-std::pow(k / A, inv_B));
    sum.add(term);
    const double partial = sum.value();
    if (term < kTailStopRatio * partial || (term == 0.0 && partial == 0.0)) return partial;
  }
  throw BudgetError("direct tail summation exceeded " + std::to_string(kTailTermCap) + " terms");
}

/// A (B/2)^B: beyond it k^{1/2} exp(-(k/A)^{1/B}) is decreasing.
inline double series_integral_threshold(double A, double B) { return A * std::pow(B / 2.0, B); }

/// A max(3B/2, 1)^B.
inline double integral_tail_threshold(double A, double B) { return A * std::pow(std::max(1.5 * B, 1.0), B); }

/// A^{1/B} B max(3B/2,1) n^{3/2-1/B} exp(-(n/A)^{1/B}), an upper bound on
/// the tail sum obtained by comparing it with ∫_n^∞ t^{1/2} exp(-(t/A)^{1/B}) dt.
inline double tail_sum_bound(double A, double B, std::uint64_t n) {
  if (!(A > 0.0) || !(B > 0.0)) throw DomainError("tail bound needs A > 0 and B > 0");
  const double nn = static_cast<double>(n);
  if (!(nn >= series_integral_threshold(A, B)))
    throw DomainError("series-integral comparison needs n >= A(B/2)^B = " + format_real(series_integral_threshold(A, B)));
  if (!(nn >= integral_tail_threshold(A, B)))
    throw DomainError("integral tail estimate needs n >= A max(3B/2,1)^B = " + format_real(integral_tail_threshold(A, B)));
  return std::pow(A, 1.0 / B) * B * std::max(1.5 * B, 1.0) * std::pow(nn, 1.5 - 1.0 / B) *
         std::exp(-std::pow(nn / A, 1.0 / B));
}

/// Γ(a, x) <= max(a,1) x^{a-1} e^{-x} for x > max(a, 1).
inline double incomplete_gamma_upper(double a, double x) {
  if (!(a > 0.0)) throw DomainError("incomplete gamma bound needs a > 0");
  if (!(x > std::max(a, 1.0)))
    throw DomainError("incomplete gamma bound needs x > max(a,1) = " + format_real(std::max(a, 1.0)) +
                      ", got x=" + format_real(x));
  return std::max(a, 1.0) * std::pow(x, a - 1.0) * std::exp(-x);
}

/// incomplete_gamma_upper(a, x) · e^x, which stays representable for large x.
inline double incomplete_gamma_upper_scaled(double a, double x) {
  if (!(a > 0.0)) throw DomainError("incomplete gamma bound needs a > 0");
  if (!(x > std::max(a, 1.0))) throw DomainError("incomplete gamma bound needs x > max(a,1)");
  return std::max(a, 1.0) * std::pow(x, a - 1.0);
}

struct InequalityPair {
  double lhs;
  double rhs;
};

namespace detail {
inline void require_positive(std::initializer_list<double> xs) {
  for (double x : xs)
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("all parameters must be finite and strictly positive");
}
} // namespace detail

/// (n^u exp(-(n/A)^{1/B}), A^u δ^{-uB} exp((uBδ - 1)(n/A)^{1/B})) with lhs <= rhs.
inline InequalityPair power_exp_bound(double u, double delta, double A, double B, double n) {
  detail::require_positive({u, delta, A, B, n});
  const double x = std::pow(n / A, 1.0 / B);
  return InequalityPair{std::pow(n, u) * std::exp(-x),
                        std::pow(A, u) * std::pow(delta, -u * B) * std::exp((u * B * delta - 1.0) * x)};
}

/// Logarithms of both sides of power_exp_bound.
inline InequalityPair power_exp_bound_log(double u, double delta, double A, double B, double n) {
  detail::require_positive({u, delta, A, B, n});
  const double x = std::pow(n / A, 1.0 / B);
  return InequalityPair{u * std::log(n) - x, u * std::log(A) - u * B * std::log(delta) + (u * B * delta - 1.0) * x};
}

} // namespace wtl::transfer
