#pragma once

// Exponential tractability classes, classification of complexity bound
// families and data, and grid diagnostics for the weak notions.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "wtl/error.hpp"
#include "wtl/numeric.hpp"
#include "wtl/transfer.hpp"

namespace wtl::tractability {

/// Ordered strongest first; each class implies all later ones.
enum class TractabilityClass { exp_spt, exp_pt, exp_qpt, exp_uwt, exp_wt, unclassified };

inline std::string to_string(TractabilityClass c) {
  switch (c) {
  case TractabilityClass::exp_spt: return "EXP-SPT";
  case TractabilityClass::exp_pt: return "EXP-PT";
  case TractabilityClass::exp_qpt: return "EXP-QPT";
  case TractabilityClass::exp_uwt: return "EXP-UWT";
  case TractabilityClass::exp_wt: return "EXP-WT";
  case TractabilityClass::unclassified: return "UNCLASSIFIED";
  }
  return "UNCLASSIFIED";
}

inline constexpr bool stronger_or_equal(TractabilityClass a, TractabilityClass b) {
  return static_cast<int>(a) <= static_cast<int>(b);
}

/// All strictly weaker classes, in chain order.
inline std::vector<TractabilityClass> implied_classes(TractabilityClass cls) {
  if (cls == TractabilityClass::unclassified) throw DomainError("UNCLASSIFIED implies nothing");
  std::vector<TractabilityClass> out;
  for (int c = static_cast<int>(cls) + 1; c <= static_cast<int>(TractabilityClass::exp_wt); ++c)
    out.push_back(static_cast<TractabilityClass>(c));
  return out;
}

// ---------------------------------------------------------------------------
// Families

/// n <= A (1 + ln ε^{-1})^B for every d.
struct ConstantForm {
  double A;
  double B;
};

/// n <= c d^q (1 + ln ε^{-1})^p.
struct PolynomialForm {
  double c;
  double q;
  double p;
};

/// n <= c exp(t ln_+ d · ln_+ ln_+ ε^{-1}).
struct QuasiPolynomialForm {
  double c;
  double t;
};

/// Per-dimension profiles n <= A_d (1 + ln ε^{-1})^{B_d}.
struct TabulatedForm {
  struct Row {
    std::uint64_t d;
    double A;
    double B;
  };
  std::vector<Row> rows;
};

using ProfileFamily = std::variant<ConstantForm, PolynomialForm, QuasiPolynomialForm, TabulatedForm>;

inline void validate(const ProfileFamily& family) {
  std::visit(
      [](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ConstantForm>) {
          if (!(f.A > 0.0) || !(f.B > 0.0)) throw ValidationError("constant form needs A > 0 and B > 0");
        } else if constexpr (std::is_same_v<T, PolynomialForm>) {
          if (!(f.c > 0.0) || !(f.p > 0.0) || !(f.q >= 0.0))
            throw ValidationError("polynomial form needs c > 0, p > 0, q >= 0");
        } else if constexpr (std::is_same_v<T, QuasiPolynomialForm>) {
          if (!(f.c > 0.0) || !(f.t > 0.0)) throw ValidationError("quasi-polynomial form needs c > 0 and t > 0");
        } else {
          if (f.rows.empty()) throw ValidationError("tabulated form has no rows");
          for (const auto& r : f.rows)
            if (r.d < 1 || !(r.A > 0.0) || !(r.B > 0.0))
              throw ValidationError("tabulated rows need d >= 1, A > 0, B > 0");
        }
      },
      family);
}

inline std::string describe(const ProfileFamily& family) {
  return std::visit(
      [](const auto& f) -> std::string {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ConstantForm>)
          return "constant(A=" + format_real(f.A) + ",B=" + format_real(f.B) + ")";
        else if constexpr (std::is_same_v<T, PolynomialForm>)
          return "polynomial(c=" + format_real(f.c) + ",q=" + format_real(f.q) + ",p=" + format_real(f.p) + ")";
        else if constexpr (std::is_same_v<T, QuasiPolynomialForm>)
          return "quasi-poly(c=" + format_real(f.c) + ",t=" + format_real(f.t) + ")";
        else
          return "tabulated(" + std::to_string(f.rows.size()) + " rows)";
      },
      family);
}

/// ln of the declared bound at (d, ε); tabulated families need a row for d.
inline double log_bound(const ProfileFamily& family, std::uint64_t d, Epsilon eps) {
  const double dd = static_cast<double>(d);
  const double lf = eps.log_factor();
  return std::visit(
      [&](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ConstantForm>)
          return std::log(f.A) + f.B * std::log(lf);
        else if constexpr (std::is_same_v<T, PolynomialForm>)
          return std::log(f.c) + f.q * std::log(dd) + f.p * std::log(lf);
        else if constexpr (std::is_same_v<T, QuasiPolynomialForm>)
          return std::log(f.c) + f.t * ln_plus(dd) * ln_plus(lf);
        else {
          for (const auto& r : f.rows)
            if (r.d == d) return std::log(r.A) + r.B * std::log(lf);
          throw DomainError("tabulated family has no row for d=" + std::to_string(d));
        }
      },
      family);
}

// ---------------------------------------------------------------------------
// Fitting

struct DataPoint {
  std::uint64_t d;
  Epsilon eps;
  double n;
};

struct ProfileFit {
  transfer::ComplexityProfile profile;
  double raw_A;            ///< exp(intercept) before clamping
  bool clamped;            ///< raw_A < 1 was raised to 1
  double max_rel_residual; ///< max |n_fit/n - 1| with the unclamped fit
};

/// Least squares of ln n on ln(1 + ln ε^{-1}): B = slope, A = exp(intercept).
inline ProfileFit fit_profile(const std::vector<std::pair<Epsilon, double>>& points) {
  if (points.size() < 3) throw FitError("profile fit needs at least 3 points");
  double sx = 0, sy = 0;
  for (const auto& [eps, n] : points) {
    if (!(n >= 1.0)) throw FitError("profile fit needs n >= 1");
    sx += std::log(eps.log_factor());
    sy += std::log(n);
  }
  const double k = static_cast<double>(points.size());
  const double mx = sx / k, my = sy / k;
  double sxx = 0, sxy = 0;
  for (const auto& [eps, n] : points) {
    const double dx = std::log(eps.log_factor()) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(n) - my);
  }
  if (!(sxx > 1e-24)) throw FitError("degenerate design: all epsilon values coincide");
  const double B = sxy / sxx;
  const double log_A = my - B * mx;
  double worst = 0.0;
  for (const auto& [eps, n] : points)
    worst = std::max(worst, std::abs(std::exp(log_A + B * std::log(eps.log_factor())) / n - 1.0));
  if (!(B > 0.0)) throw FitError("fitted exponent B=" + format_real(B) + " is not positive");
  const double raw_A = std::exp(log_A);
  return ProfileFit{transfer::ComplexityProfile{std::max(raw_A, 1.0), B}, raw_A, raw_A < 1.0, worst};
}

struct FormFit {
  TractabilityClass cls;
  std::vector<double> coefficients;  ///< form-specific, see classify_data
  double max_rel_residual;
};

namespace detail {

inline FormFit fit_linear(TractabilityClass cls, const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  const Eigen::VectorXd beta = X.colPivHouseholderQr().solve(y);
  const Eigen::VectorXd fitted = X * beta;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) worst = std::max(worst, std::abs(std::exp(fitted(i) - y(i)) - 1.0));
  return FormFit{cls, std::vector<double>(beta.data(), beta.data() + beta.size()), worst};
}

} // namespace detail

inline constexpr double kFormResidualTolerance = 0.05;

struct DataClassification {
  TractabilityClass cls;
  std::vector<FormFit> attempts;  ///< in strength order
};

/// Fits each parametric form in strength order and accepts the first with
/// max relative residual <= 5%:
///   EXP-SPT  ln n = ln C + p ln(1+L)                 coefficients {C, p}
///   EXP-PT   ln n = ln C + q ln d + p ln(1+L)        coefficients {C, q, p}
///   EXP-QPT  ln n = ln C + t (1+ln d)(1+ln(1+L))     coefficients {C, t}
/// with L = ln ε^{-1}. Finite data never certifies a weak class.
inline DataClassification classify_data(const std::vector<DataPoint>& data) {
  if (data.size() < 3) throw FitError("classification needs at least 3 data points");
  const auto rows = static_cast<Eigen::Index>(data.size());
  Eigen::VectorXd y(rows), lnd(rows), lnl(rows), qp(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& pt = data[static_cast<std::size_t>(i)];
    if (!(pt.n >= 1.0) || pt.d < 1) throw FitError("data points need n >= 1 and d >= 1");
    y(i) = std::log(pt.n);
    lnd(i) = std::log(static_cast<double>(pt.d));
    lnl(i) = std::log(pt.eps.log_factor());
    qp(i) = ln_plus(static_cast<double>(pt.d)) * ln_plus(pt.eps.log_factor());
  }
  if (lnl.maxCoeff() - lnl.minCoeff() < 1e-12) throw FitError("degenerate design: all epsilon values coincide");
  const bool varied_d = lnd.maxCoeff() - lnd.minCoeff() > 1e-12;

  DataClassification out{TractabilityClass::unclassified, {}};
  auto to_constant = [](FormFit f) {
    f.coefficients[0] = std::exp(f.coefficients[0]);
    return f;
  };

  Eigen::MatrixXd X(rows, 2);
  X << Eigen::VectorXd::Ones(rows), lnl;
  out.attempts.push_back(to_constant(detail::fit_linear(TractabilityClass::exp_spt, X, y)));
  if (varied_d) {
    Eigen::MatrixXd X3(rows, 3);
    X3 << Eigen::VectorXd::Ones(rows), lnd, lnl;
    out.attempts.push_back(to_constant(detail::fit_linear(TractabilityClass::exp_pt, X3, y)));
  }
  Eigen::MatrixXd Xq(rows, 2);
  Xq << Eigen::VectorXd::Ones(rows), qp;
  out.attempts.push_back(to_constant(detail::fit_linear(TractabilityClass::exp_qpt, Xq, y)));

  for (const auto& f : out.attempts) {
    const bool positive = f.coefficients.back() > 0.0 &&
                          (f.cls != TractabilityClass::exp_pt || f.coefficients[1] >= -1e-9);
    if (positive && f.max_rel_residual <= kFormResidualTolerance) {
      out.cls = f.cls;
      break;
    }
  }
  return out;
}

/// Standard grid: d = 1..64, ε = e^{-k}, k = 1..32.
inline std::vector<std::pair<std::uint64_t, Epsilon>> standard_grid() {
  std::vector<std::pair<std::uint64_t, Epsilon>> g;
  for (std::uint64_t d = 1; d <= 64; ++d)
    for (int k = 1; k <= 32; ++k) g.emplace_back(d, Epsilon::from_log_inverse(k));
  return g;
}

/// Strongest class whose defining bound the declared form satisfies
/// identically. Polynomial forms with q = 0 are EXP-SPT.
inline TractabilityClass classify(const ProfileFamily& family) {
  validate(family);
  return std::visit(
      [&](const auto& f) -> TractabilityClass {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ConstantForm>) {
          return TractabilityClass::exp_spt;
        } else if constexpr (std::is_same_v<T, PolynomialForm>) {
          return f.q == 0.0 ? TractabilityClass::exp_spt : TractabilityClass::exp_pt;
        } else if constexpr (std::is_same_v<T, QuasiPolynomialForm>) {
          return TractabilityClass::exp_qpt;
        } else {
          std::vector<DataPoint> data;
          for (const auto& r : f.rows)
            for (int k = 1; k <= 32; ++k) {
              const auto eps = Epsilon::from_log_inverse(k);
              data.push_back(DataPoint{r.d, eps, std::exp(log_bound(family, r.d, eps))});
            }
          return classify_data(data).cls;
        }
      },
      family);
}

// ---------------------------------------------------------------------------
// Witnesses for the strong notions

/// Constants showing the family satisfies the defining bound of `cls`:
///   EXP-SPT {C, p}, EXP-PT {C, q, p}, EXP-QPT {C, t}.
/// Returns nothing when the declared form does not yield the class.
inline std::optional<std::vector<double>> witness(const ProfileFamily& family, TractabilityClass cls) {
  validate(family);
  using TC = TractabilityClass;
  return std::visit(
      [&](const auto& f) -> std::optional<std::vector<double>> {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ConstantForm>) {
          if (cls == TC::exp_spt) return std::vector<double>{f.A, f.B};
          if (cls == TC::exp_pt) return std::vector<double>{f.A, 1.0, f.B};
          if (cls == TC::exp_qpt) return std::vector<double>{f.A, f.B};
        } else if constexpr (std::is_same_v<T, PolynomialForm>) {
          if (cls == TC::exp_spt && f.q == 0.0) return std::vector<double>{f.c, f.p};
          if (cls == TC::exp_pt) return std::vector<double>{f.c, f.q > 0.0 ? f.q : 1.0, f.p};
          if (cls == TC::exp_qpt) return std::vector<double>{f.c, std::max(f.q, f.p)};
        } else if constexpr (std::is_same_v<T, QuasiPolynomialForm>) {
          if (cls == TC::exp_qpt) return std::vector<double>{f.c, f.t};
        }
        return std::nullopt;
      },
      family);
}

/// ln of the defining bound of a strong class with the given constants.
inline double log_class_bound(TractabilityClass cls, const std::vector<double>& w, std::uint64_t d, Epsilon eps) {
  const double dd = static_cast<double>(d);
  const double lf = eps.log_factor();
  switch (cls) {
  case TractabilityClass::exp_spt: return std::log(w[0]) + w[1] * std::log(lf);
  case TractabilityClass::exp_pt: return std::log(w[0]) + w[1] * std::log(dd) + w[2] * std::log(lf);
  case TractabilityClass::exp_qpt: return std::log(w[0]) + w[1] * ln_plus(dd) * ln_plus(lf);
  default: throw DomainError("only EXP-SPT, EXP-PT and EXP-QPT have a finite defining bound");
  }
}

// ---------------------------------------------------------------------------
// Weak-notion diagnostics

struct GridPoint {
  std::uint64_t d;
  Epsilon eps;
};

struct UwtDiagnostic {
  double alpha;
  double beta;
  std::vector<double> ratios;
  bool decreasing_to_zero;
};

/// Grid d = 2^j, ε = e^{-2^j}, j = 1..j_max.
inline std::vector<GridPoint> dyadic_grid(int j_max) {
  std::vector<GridPoint> g;
  for (int j = 1; j <= j_max; ++j)
    g.push_back(GridPoint{std::uint64_t{1} << j, Epsilon::from_log_inverse(std::ldexp(1.0, j))});
  return g;
}

/// Ratios ln n(ε,d) / (d^α + (1 + ln ε^{-1})^β) along a grid with d + ε^{-1}
/// strictly increasing. The verdict is positive when the last three ratios
/// are each at most half the first and the final third is nonincreasing.
/// This is a finite-grid heuristic, not a proof of the limit.
inline UwtDiagnostic uwt_diagnostic(const std::function<double(std::uint64_t, Epsilon)>& log_n, double alpha,
                                    double beta, const std::vector<GridPoint>& grid) {
  if (!(alpha > 0.0) || !(beta > 0.0)) throw ValidationError("alpha and beta must be positive");
  if (grid.size() < 8) throw ValidationError("diagnostic grid needs at least 8 points");
  double prev = -std::numeric_limits<double>::infinity();
  for (const auto& g : grid) {
    // ln(d + ε^{-1}) without overflowing e^L.
    const double a = std::log(static_cast<double>(g.d));
    const double b = g.eps.log_inverse();
    const double key = std::max(a, b) + std::log1p(std::exp(-std::abs(a - b)));
    if (!(key > prev)) throw ValidationError("grid must have strictly increasing d + 1/epsilon");
    prev = key;
  }
  UwtDiagnostic out{alpha, beta, {}, false};
  for (const auto& g : grid) {
    const double denom = std::pow(static_cast<double>(g.d), alpha) + std::pow(g.eps.log_factor(), beta);
    out.ratios.push_back(log_n(g.d, g.eps) / denom);
  }
  const auto& r = out.ratios;
  const std::size_t k = r.size();
  bool ok = true;
  for (std::size_t i = k - 3; i < k; ++i) ok = ok && r[i] <= 0.5 * r[0];
  const std::size_t third = (k + 2) / 3;
  for (std::size_t i = k - third + 1; i < k; ++i) ok = ok && r[i] <= r[i - 1];
  out.decreasing_to_zero = ok;
  return out;
}

struct ClassificationReport {
  std::string family;
  TractabilityClass cls;
  std::vector<TractabilityClass> implied;
  std::vector<FormFit> fits;
  std::vector<GridPoint> diagnostic_grid;
  std::vector<UwtDiagnostic> diagnostics;
};

} // namespace wtl::tractability
