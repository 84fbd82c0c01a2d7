#pragma once

// Weighted least-squares recovery from i.i.d. function values on Hilbert
// model spaces with an explicit orthonormal system, and exact worst-case
// error evaluation of the resulting linear sampling rule on a truncated space.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "wtl/error.hpp"
#include "wtl/model_spaces.hpp"
#include "wtl/numeric.hpp"
#include "wtl/parallel.hpp"
#include "wtl/transfer.hpp"

namespace wtl::sampler {

using Complex = std::complex<double>;
using Point = std::vector<double>;
using spaces::BasisKind;

// ---------------------------------------------------------------------------
// Univariate orthonormal bases

/// Frequency of the k-th trigonometric basis function: 0, 1, -1, 2, -2, ...
inline long trig_frequency(std::size_t k) {
  if (k == 0) return 0;
  return (k % 2 == 1) ? static_cast<long>((k + 1) / 2) : -static_cast<long>(k / 2);
}

/// √(2k+1) P_k(x), orthonormal for the uniform probability measure on [-1, 1].
inline double normalized_legendre(std::size_t k, double x) {
  double p0 = 1.0;
  if (k == 0) return 1.0;
  double p1 = x;
  for (std::size_t j = 2; j <= k; ++j) {
    const double jj = static_cast<double>(j);
    const double p2 = ((2.0 * jj - 1.0) * x * p1 - (jj - 1.0) * p0) / jj;
    p0 = p1;
    p1 = p2;
  }
  return std::sqrt(2.0 * static_cast<double>(k) + 1.0) * p1;
}

inline Complex univariate_value(BasisKind kind, std::size_t k, double x) {
  switch (kind) {
  case BasisKind::trigonometric: {
    const double phase = 2.0 * std::numbers::pi * static_cast<double>(trig_frequency(k)) * x;
    return {std::cos(phase), std::sin(phase)};
  }
  case BasisKind::legendre: return {normalized_legendre(k, x), 0.0};
  case BasisKind::none: break;
  }
  throw DomainError("model space has no orthonormal system attached");
}

/// sup_x |b_k(x)|^2.
inline double univariate_sup_sq(BasisKind kind, std::size_t k) {
  return kind == BasisKind::legendre ? 2.0 * static_cast<double>(k) + 1.0 : 1.0;
}

inline double domain_lower(BasisKind kind) { return kind == BasisKind::legendre ? -1.0 : 0.0; }
inline double domain_upper(BasisKind) { return 1.0; }

// ---------------------------------------------------------------------------
// Tensor orthonormal system

/// Product basis on [0,1)^d (torus) or [-1,1]^d with the uniform probability
/// measure, ordered like the tensor eigenvalue enumeration of the space.
class OrthonormalSystem {
public:
  OrthonormalSystem(BasisKind kind, std::size_t dim, std::vector<std::vector<std::size_t>> indices)
      : kind_(kind), dim_(dim), indices_(std::move(indices)) {
    if (kind_ == BasisKind::none) throw DomainError("model space has no orthonormal system attached");
    if (dim_ == 0) throw DomainError("orthonormal system needs dimension >= 1");
    for (const auto& idx : indices_)
      if (idx.size() != dim_) throw ValidationError("multi-index length does not match dimension");
  }

  /// The first `length` basis functions of the space's singular system.
  static OrthonormalSystem for_space(const spaces::ModelSpace& space, std::size_t length) {
    if (space.basis() == BasisKind::none) throw DomainError("model space has no orthonormal system attached");
    std::vector<std::vector<std::size_t>> idx;
    for (auto& t : spaces::tensor_top_terms(space, length)) idx.push_back(std::move(t.index));
    return OrthonormalSystem(space.basis(), space.dimension(), std::move(idx));
  }

  BasisKind kind() const { return kind_; }
  std::size_t dimension() const { return dim_; }
  std::size_t size() const { return indices_.size(); }
  const std::vector<std::size_t>& index(std::size_t j) const { return indices_.at(j); }

  Complex value(std::size_t j, std::span<const double> x) const {
    const auto& idx = indices_.at(j);
    Complex v = univariate_value(kind_, idx[0], x[0]);
    for (std::size_t i = 1; i < dim_; ++i) v *= univariate_value(kind_, idx[i], x[i]);
    return v;
  }

  double sup_sq(std::size_t j) const {
    double s = 1.0;
    for (auto k : indices_.at(j)) s *= univariate_sup_sq(kind_, k);
    return s;
  }

  double lower() const { return domain_lower(kind_); }
  double upper() const { return domain_upper(kind_); }

  /// True when Σ_{j<m} |b_j|^2 is constant, i.e. the Christoffel density is uniform.
  bool uniform_density(std::size_t) const { return kind_ == BasisKind::trigonometric; }

private:
  BasisKind kind_;
  std::size_t dim_;
  std::vector<std::vector<std::size_t>> indices_;
};

// ---------------------------------------------------------------------------
// Quadrature for the reference measure

/// Gauss-Legendre nodes and weights on [-1, 1], weights normalized to sum 1.
inline void gauss_legendre(std::size_t q, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(q, 0.0);
  weights.assign(q, 0.0);
  for (std::size_t i = 0; i < q; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(q) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (std::size_t j = 2; j <= q; ++j) {
        const double jj = static_cast<double>(j);
        const double p2 = ((2.0 * jj - 1.0) * x * p1 - (jj - 1.0) * p0) / jj;
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(q) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    nodes[i] = x;
    weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);  // 2/((1-x^2)P'^2) halved for the probability measure
  }
}

/// Tensor quadrature exact for products of two of the first m basis functions.
struct Quadrature {
  std::vector<Point> nodes;
  std::vector<double> weights;
};

inline Quadrature reference_quadrature(const OrthonormalSystem& system, std::size_t m) {
  std::size_t max_index = 0;
  for (std::size_t j = 0; j < std::min(m, system.size()); ++j)
    for (auto k : system.index(j)) max_index = std::max(max_index, k);

  std::vector<double> nodes1, weights1;
  if (system.kind() == BasisKind::trigonometric) {
    const std::size_t q = 2 * static_cast<std::size_t>(std::abs(trig_frequency(max_index)) + 1) + 1;
    for (std::size_t i = 0; i < q; ++i) {
      nodes1.push_back(static_cast<double>(i) / static_cast<double>(q));
      weights1.push_back(1.0 / static_cast<double>(q));
    }
  } else {
    gauss_legendre(max_index + 2, nodes1, weights1);
  }

  Quadrature quad;
  const std::size_t d = system.dimension();
  std::vector<std::size_t> pos(d, 0);
  while (true) {
    Point p(d);
    double w = 1.0;
    for (std::size_t i = 0; i < d; ++i) {
      p[i] = nodes1[pos[i]];
      w *= weights1[pos[i]];
    }
    quad.nodes.push_back(std::move(p));
    quad.weights.push_back(w);
    std::size_t i = 0;
    while (i < d && ++pos[i] == nodes1.size()) pos[i++] = 0;
    if (i == d) break;
  }
  return quad;
}

/// max_{j,k<m} |<b_j, b_k> - δ_jk| by quadrature.
inline double orthonormality_defect(const OrthonormalSystem& system, std::size_t m) {
  if (m > system.size()) throw DomainError("orthonormality check beyond system length");
  const auto quad = reference_quadrature(system, m);
  Eigen::MatrixXcd V(quad.nodes.size(), m);
  for (std::size_t i = 0; i < quad.nodes.size(); ++i)
    for (std::size_t j = 0; j < m; ++j) V(i, j) = system.value(j, quad.nodes[i]) * std::sqrt(quad.weights[i]);
  const Eigen::MatrixXcd G = V.adjoint() * V - Eigen::MatrixXcd::Identity(m, m);
  return G.cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// Christoffel sampling

/// ρ_m(x) = (1/m) Σ_{j<m} |b_j(x)|^2, a probability density for the
/// reference measure.
class ChristoffelDensity {
public:
  ChristoffelDensity(OrthonormalSystem system, std::size_t m) : system_(std::move(system)), m_(m) {
    if (m_ == 0) throw DomainError("Christoffel density needs m >= 1");
    if (m_ > system_.size())
      throw DomainError("Christoffel density needs m <= system length " + std::to_string(system_.size()));
    for (std::size_t j = 0; j < m_; ++j) sup_ += system_.sup_sq(j);
    sup_ /= static_cast<double>(m_);
  }

  double operator()(std::span<const double> x) const {
    if (uniform()) return 1.0;
    double s = 0.0;
    for (std::size_t j = 0; j < m_; ++j) s += std::norm(system_.value(j, x));
    return s / static_cast<double>(m_);
  }

  bool uniform() const { return system_.uniform_density(m_); }
  /// Upper bound on the density, used as the rejection envelope.
  double sup() const { return sup_; }
  std::size_t m() const { return m_; }
  const OrthonormalSystem& system() const { return system_; }

private:
  OrthonormalSystem system_;
  std::size_t m_;
  double sup_ = 0.0;
};

inline ChristoffelDensity christoffel_density(const OrthonormalSystem& system, std::size_t m) {
  return ChristoffelDensity(system, m);
}

/// SplitMix64 finalizer; maps (seed, stream) to independent engine seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Seed of stream `stream` derived from a base seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream + 1));
}

/// mt19937_64 with a bit-exact uniform on [0, 1) (top 53 bits), so draws are
/// identical on every platform.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
  std::mt19937_64 engine_;
};

struct SamplingPlan {
  std::vector<Point> points;
  std::vector<double> weights;  ///< 1/ρ_m(x_i)
  std::size_t m = 0;
  std::uint64_t seed = 0;

  std::size_t n() const { return points.size(); }
};

inline constexpr std::size_t kRejectionAttemptsPerPoint = 100'000;

/// n i.i.d. points from ρ_m: inverse transform when ρ_m is uniform,
/// rejection from the uniform proposal otherwise.
inline SamplingPlan draw_plan(const OrthonormalSystem& system, std::size_t m, std::size_t n, std::uint64_t seed,
                              std::size_t attempts_per_point = kRejectionAttemptsPerPoint) {
  if (n == 0) throw DomainError("sampling plan needs n >= 1");
  const auto density = christoffel_density(system, m);
  Rng rng(seed);
  const double lo = system.lower();
  const double width = system.upper() - system.lower();
  const std::size_t d = system.dimension();

  SamplingPlan plan;
  plan.m = m;
  plan.seed = seed;
  plan.points.reserve(n);
  plan.weights.reserve(n);
  std::size_t budget = attempts_per_point * n;
  while (plan.points.size() < n) {
    Point x(d);
    for (auto& xi : x) xi = lo + width * rng.uniform();
    const double rho = density(x);
    if (!density.uniform()) {
      if (budget-- == 0)
        throw SamplingError("rejection sampling exhausted its budget of " + std::to_string(attempts_per_point * n) +
                            " proposals");
      if (rng.uniform() * density.sup() > rho) continue;
    }
    plan.points.push_back(std::move(x));
    plan.weights.push_back(1.0 / rho);
  }
  return plan;
}

/// Plan on caller-chosen points with Christoffel weights.
inline SamplingPlan plan_from_points(const OrthonormalSystem& system, std::size_t m, std::vector<Point> points,
                                     std::uint64_t seed = 0) {
  const auto density = christoffel_density(system, m);
  SamplingPlan plan;
  plan.m = m;
  plan.seed = seed;
  for (auto& p : points) {
    if (p.size() != system.dimension()) throw ValidationError("point dimension does not match system");
    const double rho = density(p);
    if (!(rho > 0.0)) throw DomainError("Christoffel density vanishes at a plan point");
    plan.weights.push_back(1.0 / rho);
    plan.points.push_back(std::move(p));
  }
  return plan;
}

// ---------------------------------------------------------------------------
// Recovery

/// Linear map from n samples to m coefficients minimizing
/// Σ_i w_i |f(x_i) - Σ_j c_j b_j(x_i)|^2.
class RecoveryOperator {
public:
  RecoveryOperator(const OrthonormalSystem& system, const SamplingPlan& plan) : m_(plan.m), n_(plan.n()) {
    if (m_ == 0 || m_ > system.size()) throw DomainError("plan basis size outside system length");
    if (n_ < m_)
      throw SingularityError("rank-deficient design: n=" + std::to_string(n_) + " samples cannot determine m=" +
                                 std::to_string(m_) + " coefficients",
                             std::numeric_limits<double>::infinity());
    Eigen::MatrixXcd design(n_, m_);
    sqrt_w_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      sqrt_w_(i) = std::sqrt(plan.weights[i]);
      for (std::size_t j = 0; j < m_; ++j) design(i, j) = sqrt_w_(i) * system.value(j, plan.points[i]);
    }
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    const double smax = s(0);
    const double smin = s(m_ - 1);
    condition_ = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
    if (!(smin > smax * static_cast<double>(std::max(n_, m_)) * std::numeric_limits<double>::epsilon()))
      throw SingularityError("rank-deficient design (condition number " + format_real(condition_) + ")", condition_);
    // pinv(design) · diag(√w)
    const Eigen::VectorXd inv_s = s.cwiseInverse();
    pinv_ = svd.matrixV() * inv_s.asDiagonal() * svd.matrixU().adjoint() * sqrt_w_.asDiagonal();
  }

  Eigen::VectorXcd coefficients(std::span<const Complex> samples) const {
    if (samples.size() != n_) throw ValidationError("sample count does not match plan");
    const Eigen::Map<const Eigen::VectorXcd> y(samples.data(), static_cast<Eigen::Index>(n_));
    return pinv_ * y;
  }

  /// m × n matrix mapping samples to coefficients.
  const Eigen::MatrixXcd& matrix() const { return pinv_; }
  double condition() const { return condition_; }
  std::size_t m() const { return m_; }
  std::size_t n() const { return n_; }

private:
  std::size_t m_;
  std::size_t n_;
  Eigen::VectorXd sqrt_w_;
  Eigen::MatrixXcd pinv_;
  double condition_ = 0.0;
};

inline Eigen::VectorXcd solve_weighted_ls(const OrthonormalSystem& system, const SamplingPlan& plan,
                                          std::span<const Complex> samples) {
  return RecoveryOperator(system, plan).coefficients(samples);
}

struct WorstCaseError {
  double error;      ///< sup over the unit ball of the M-truncated space
  double remainder;  ///< σ_{M+1}, the part of the spectrum not resolved
  double condition;
  std::size_t M;
};

/// Exact worst-case L2 error of the plan's recovery rule over the unit ball
/// of the M-truncated space: the spectral norm of (I - E P V_M) Σ_M, where P
/// maps samples to coefficients, V_M evaluates the first M singular
/// functions at the plan points and Σ_M = diag(σ_1..σ_M).
inline WorstCaseError empirical_worst_case_error(const spaces::ModelSpace& space, const SamplingPlan& plan,
                                                 std::size_t M) {
  if (M < plan.m) throw DomainError("evaluation truncation M must be >= m");
  const auto terms = spaces::tensor_top_terms(space, M + 1);
  std::vector<std::vector<std::size_t>> idx;
  idx.reserve(M);
  for (std::size_t j = 0; j < M; ++j) idx.push_back(terms[j].index);
  const OrthonormalSystem system(space.basis(), space.dimension(), std::move(idx));
  const RecoveryOperator op(system, plan);

  const std::size_t n = plan.n();
  Eigen::MatrixXcd VM(n, M);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < M; ++j) VM(i, j) = system.value(j, plan.points[i]);

  Eigen::MatrixXcd err = Eigen::MatrixXcd::Identity(M, M);
  err.topRows(plan.m) -= op.matrix() * VM;
  for (std::size_t j = 0; j < M; ++j) err.col(j) *= std::sqrt(terms[j].value);

  Eigen::BDCSVD<Eigen::MatrixXcd> svd(err);
  return WorstCaseError{svd.singularValues()(0), std::sqrt(terms[M].value), op.condition(), M};
}

// ---------------------------------------------------------------------------
// Empirical e_n curves

struct CurveOptions {
  double oversampling = 2.0;    ///< n = ⌈oversampling · m ln(m+1)⌉
  std::size_t fixed_m = 0;      ///< 0: derive m from n via the oversampling rule
  std::size_t truncation_factor = 4;  ///< M = factor · m
  transfer::BoundConstants constants{};
};

struct CurveRow {
  std::size_t n;
  std::size_t m;
  double median_error;
  double best_error;
  double floor_sigma;    ///< σ_{n+1}
  double ceiling_bound;  ///< sampling-width bound on e_n from the width chain (+inf if n < 2b)
  double remainder;      ///< σ_{M+1}
};

/// ⌈factor · m ln(m+1)⌉.
inline std::size_t oversampled_count(std::size_t m, double factor) {
  return static_cast<std::size_t>(std::ceil(factor * static_cast<double>(m) * std::log(static_cast<double>(m) + 1.0)));
}

/// Largest m whose oversampled count fits in n (at least 1).
inline std::size_t basis_size_for(std::size_t n, double factor) {
  std::size_t m = 1;
  while (oversampled_count(m + 1, factor) <= n) ++m;
  return m;
}

/// Bound on e_n obtained from the Hilbert widths c_k = σ_{k+1} through
/// a_k <= (1+√k) c_k and the tail-sum inequality at n' = ⌊n/b⌋.
inline double chain_ceiling(const spaces::ModelSpace& space, std::size_t n, const transfer::BoundConstants& consts) {
  const std::uint64_t n_prime = n / consts.b;
  if (n_prime < 2) return std::numeric_limits<double>::infinity();
  for (std::size_t len = n_prime + 256; len <= (std::size_t{1} << 20); len *= 4) {
    try {
      const auto c = spaces::widths_from_eigenvalues(spaces::tensor_top_eigenvalues(space, len), spaces::WidthKind::gelfand);
      std::vector<double> a(c.size());
      for (std::size_t k = 0; k < c.size(); ++k) a[k] = k == 0 ? c.at(0) : transfer::pietsch_bound(c.at(k), k);
      // (1+√k) c_k need not be monotone; the stored sequence only needs to be nonnegative here.
      double tail = 0.0;
      bool done = false;
      for (std::size_t k = n_prime; k < a.size(); ++k) {
        tail += a[k];
        if (a[k] <= transfer::kTailStopRatio * tail) {
          done = true;
          break;
        }
      }
      if (done) return tail / static_cast<double>(n_prime);
    } catch (const RangeError&) {
      break;
    }
  }
  throw TruncationError("width tail for the ceiling bound did not converge");
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size();
  return k % 2 == 1 ? v[k / 2] : 0.5 * (v[k / 2 - 1] + v[k / 2]);
}

/// For each n: `trials` independent plans (stream (seed, grid position,
/// trial)), their exact worst-case errors, median and best.
inline std::vector<CurveRow> e_n_empirical_curve(const spaces::ModelSpace& space, const std::vector<std::size_t>& n_grid,
                                                 std::size_t trials, std::uint64_t seed, const CurveOptions& opts = {}) {
  if (n_grid.empty()) throw DomainError("n-grid is empty");
  if (trials < 1) throw DomainError("need at least one trial");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 1) throw DomainError("n-grid entries must be >= 1");
    if (i > 0 && n_grid[i] <= n_grid[i - 1]) throw DomainError("n-grid must be strictly increasing");
  }
  opts.constants.validate();

  std::vector<CurveRow> rows;
  rows.reserve(n_grid.size());
  for (std::size_t g = 0; g < n_grid.size(); ++g) {
    const std::size_t n = n_grid[g];
    const std::size_t m = opts.fixed_m > 0 ? opts.fixed_m : basis_size_for(n, opts.oversampling);
    const std::size_t M = std::max(m, opts.truncation_factor * m);
    const auto system = OrthonormalSystem::for_space(space, M);

    std::vector<WorstCaseError> results(trials, WorstCaseError{0, 0, 0, 0});
    const std::uint64_t row_seed = derive_seed(seed, g);
    parallel_for(trials, [&](std::size_t t) {
      const auto plan = draw_plan(system, m, n, derive_seed(row_seed, t));
      results[t] = empirical_worst_case_error(space, plan, M);
    });

    std::vector<double> errs;
    for (const auto& r : results) errs.push_back(r.error);
    const double floor = std::sqrt(spaces::tensor_top_eigenvalues(space, n + 1).at(n + 1));
    rows.push_back(CurveRow{n, m, median(errs), *std::min_element(errs.begin(), errs.end()), floor,
                            chain_ceiling(space, n, opts.constants), results.front().remainder});
  }
  return rows;
}

} // namespace wtl::sampler
