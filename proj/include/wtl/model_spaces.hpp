#pragma once

// Hilbert model spaces described by their spectra: univariate eigenvalue
// families, tensor-product enumeration of the d-variate spectrum, and the
// exact widths and linear-information complexity they determine.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <queue>
#include <sstream>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "wtl/error.hpp"
#include "wtl/numeric.hpp"

namespace wtl::spaces {

/// λ_k = ω^{k-1}, 0 < ω < 1.
struct Geometric {
  double omega;
};

/// λ_k = exp(-c k^κ), c > 0, κ > 0.
struct StretchedExponential {
  double c;
  double kappa;
};

/// A finite nonincreasing list; ties are permitted.
struct ExplicitList {
  std::vector<double> values;
};

using Family = std::variant<Geometric, StretchedExponential, ExplicitList>;

inline void validate(const Family& family) {
  std::visit(
      [](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Geometric>) {
          if (!(f.omega > 0.0 && f.omega < 1.0))
            throw DomainError("geometric family needs omega in (0,1), got " + format_real(f.omega));
        } else if constexpr (std::is_same_v<T, StretchedExponential>) {
          if (!(f.c > 0.0) || !(f.kappa > 0.0))
            throw DomainError("stretched-exponential family needs c > 0 and kappa > 0");
        } else {
          if (f.values.empty()) throw DomainError("explicit eigenvalue list is empty");
          if (!(f.values.front() > 0.0))
            throw DomainError("explicit eigenvalue list must start with a positive value");
          for (std::size_t i = 0; i < f.values.size(); ++i) {
            if (!(f.values[i] >= 0.0) || !std::isfinite(f.values[i]))
              throw DomainError("explicit eigenvalues must be finite and nonnegative");
            if (i > 0 && f.values[i] > f.values[i - 1])
              throw DomainError("explicit eigenvalue list must be nonincreasing");
          }
        }
      },
      family);
}

inline std::string describe(const Family& family) {
  std::ostringstream os;
  std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Geometric>) {
          os << "geometric(omega=" << format_real(f.omega) << ")";
        } else if constexpr (std::is_same_v<T, StretchedExponential>) {
          os << "stretched-exponential(c=" << format_real(f.c) << ",kappa=" << format_real(f.kappa)
             << ")";
        } else {
          os << "explicit(" << f.values.size() << " values)";
        }
      },
      family);
  return os.str();
}

/// Number of terms the family can produce (unbounded families report SIZE_MAX).
inline std::size_t available_terms(const Family& family) {
  if (const auto* list = std::get_if<ExplicitList>(&family)) return list->values.size();
  return std::numeric_limits<std::size_t>::max();
}

/// Squared singular values λ_1 >= λ_2 >= ... >= 0 of an embedding. Stored
/// 0-based: values()[0] is λ_1.
class EigenSequence {
public:
  EigenSequence(std::vector<double> values, std::string source)
      : values_(std::move(values)), source_(std::move(source)) {
    if (values_.empty()) throw ValidationError("eigenvalue sequence is empty");
    if (!(values_.front() > 0.0)) throw ValidationError("leading eigenvalue must be positive");
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!(values_[i] >= 0.0)) throw ValidationError("eigenvalues must be nonnegative");
      if (i > 0 && values_[i] > values_[i - 1])
        throw ValidationError("eigenvalues must be nonincreasing");
    }
  }

  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  /// λ_k with k counted from 1.
  double at(std::size_t k) const {
    if (k == 0 || k > values_.size())
      throw TruncationError("eigenvalue index " + std::to_string(k) + " outside stored range 1.." +
                            std::to_string(values_.size()));
    return values_[k - 1];
  }
  const std::string& source() const { return source_; }

private:
  std::vector<double> values_;
  std::string source_;
};

namespace detail {

struct Spectrum1D {
  std::vector<double> values;
  std::vector<double> logs;
};

inline Spectrum1D univariate_spectrum(const Family& family, std::size_t count) {
  validate(family);
  Spectrum1D s;
  s.values.reserve(count);
  s.logs.reserve(count);
  std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        for (std::size_t k = 1; k <= count; ++k) {
          if constexpr (std::is_same_v<T, Geometric>) {
            s.values.push_back(std::pow(f.omega, static_cast<double>(k - 1)));
            s.logs.push_back(static_cast<double>(k - 1) * std::log(f.omega));
          } else if constexpr (std::is_same_v<T, StretchedExponential>) {
            const double log_value = -f.c * std::pow(static_cast<double>(k), f.kappa);
            s.values.push_back(std::exp(log_value));
            s.logs.push_back(log_value);
          } else {
            if (k > f.values.size()) break;
            s.values.push_back(f.values[k - 1]);
            s.logs.push_back(std::log(f.values[k - 1]));
          }
        }
      },
      family);
  return s;
}

} // namespace detail

/// First `count` eigenvalues of a univariate family.
inline EigenSequence univariate_eigenvalues(const Family& family, std::size_t count) {
  if (count == 0) throw DomainError("eigenvalue count must be at least 1");
  if (count > available_terms(family))
    throw TruncationError("explicit list holds " + std::to_string(available_terms(family)) +
                          " eigenvalues, requested " + std::to_string(count));
  auto s = detail::univariate_spectrum(family, count);
  return EigenSequence(std::move(s.values), describe(family));
}

enum class BasisKind { none, trigonometric, legendre };

inline std::string to_string(BasisKind kind) {
  switch (kind) {
  case BasisKind::none: return "none";
  case BasisKind::trigonometric: return "trigonometric";
  case BasisKind::legendre: return "legendre";
  }
  return "unknown";
}

/// Spectral description of F_d: one univariate family per tensor factor.
class ModelSpace {
public:
  ModelSpace(std::size_t d, Family family, BasisKind basis = BasisKind::none)
      : ModelSpace(std::vector<Family>(d, std::move(family)), basis) {}

  explicit ModelSpace(std::vector<Family> factors, BasisKind basis = BasisKind::none)
      : factors_(std::move(factors)), basis_(basis) {
    if (factors_.empty()) throw DomainError("model space needs d >= 1");
    for (const auto& f : factors_) validate(f);
  }

  std::size_t dimension() const { return factors_.size(); }
  const std::vector<Family>& factors() const { return factors_; }
  const Family& factor(std::size_t j) const { return factors_.at(j); }
  BasisKind basis() const { return basis_; }

  std::string describe() const {
    std::ostringstream os;
    os << "d=" << factors_.size() << " [";
    for (std::size_t j = 0; j < factors_.size(); ++j)
      os << (j ? " x " : "") << spaces::describe(factors_[j]);
    os << "] basis=" << to_string(basis_);
    return os.str();
  }

private:
  std::vector<Family> factors_;
  BasisKind basis_;
};

/// One term of the d-variate spectrum: the product of univariate eigenvalues
/// selected by a 0-based multi-index.
struct TensorTerm {
  double value;
  double log_value;
  std::vector<std::size_t> index;
};

/// Underflow guard: below this threshold products are ranked by log-sums.
inline constexpr double kLogSpaceThreshold = 1e-300;

/// The N largest products λ_{k_1}···λ_{k_d}, nonincreasing, ties broken by
/// lexicographic order of the multi-index.
///
/// Best-first search over the multi-index lattice. Each index has a unique
/// parent (decrement its last nonzero coordinate) whose product is at least
/// as large and which precedes it lexicographically, so popping from a heap
/// ordered by (value desc, index asc) yields the exact sorted order without
/// deduplication.
inline std::vector<TensorTerm> tensor_top_terms(const ModelSpace& space, std::size_t N) {
  if (N == 0) throw DomainError("tensor enumeration needs N >= 1");
  const std::size_t d = space.dimension();

  std::vector<detail::Spectrum1D> factors;
  factors.reserve(d);
  bool log_space = false;
  double grid_size = 1.0;
  for (const auto& family : space.factors()) {
    const std::size_t len = std::min(N, available_terms(family));
    factors.push_back(detail::univariate_spectrum(family, len));
    grid_size *= static_cast<double>(factors.back().values.size());
    for (double v : factors.back().values)
      if (v < kLogSpaceThreshold) log_space = true;
  }
  if (static_cast<double>(N) > grid_size)
    throw RangeError("requested " + std::to_string(N) + " tensor eigenvalues but the product grid has only " +
                     format_real(grid_size) + " entries");

  struct Node {
    double score;
    double value;
    double log_value;
    std::vector<std::size_t> index;
  };
  // priority_queue pops the largest under this order.
  auto lower = [](const Node& a, const Node& b) {
    if (a.score != b.score) return a.score < b.score;
    return a.index > b.index;
  };
  std::priority_queue<Node, std::vector<Node>, decltype(lower)> heap(lower);

  auto make_node = [&](std::vector<std::size_t> index) {
    double value = factors[0].values[index[0]];
    double log_value = factors[0].logs[index[0]];
    for (std::size_t j = 1; j < d; ++j) {
      value *= factors[j].values[index[j]];
      log_value += factors[j].logs[index[j]];
    }
    if (log_space) value = std::exp(log_value);
    const double score = log_space ? log_value : value;
    return Node{score, value, log_value, std::move(index)};
  };

  heap.push(make_node(std::vector<std::size_t>(d, 0)));
  std::vector<TensorTerm> out;
  out.reserve(N);
  while (out.size() < N) {
    if (heap.empty()) throw RangeError("tensor enumeration exhausted the product grid");
    Node top = heap.top();
    heap.pop();

    std::size_t last_nonzero = 0;
    for (std::size_t j = 0; j < d; ++j)
      if (top.index[j] > 0) last_nonzero = j;
    for (std::size_t j = last_nonzero; j < d; ++j) {
      if (top.index[j] + 1 >= factors[j].values.size()) continue;
      auto child = top.index;
      ++child[j];
      heap.push(make_node(std::move(child)));
    }
    out.push_back(TensorTerm{top.value, top.log_value, std::move(top.index)});
  }
  return out;
}

inline EigenSequence tensor_top_eigenvalues(const ModelSpace& space, std::size_t N) {
  const auto terms = tensor_top_terms(space, N);
  std::vector<double> values;
  values.reserve(terms.size());
  for (const auto& t : terms) values.push_back(t.value);
  return EigenSequence(std::move(values), space.describe());
}

enum class WidthKind { linear, gelfand, sampling_linear };

inline std::string to_string(WidthKind kind) {
  switch (kind) {
  case WidthKind::linear: return "linear";
  case WidthKind::gelfand: return "gelfand";
  case WidthKind::sampling_linear: return "sampling-linear";
  }
  return "unknown";
}

/// A width family (a_n, c_n or e_n) indexed from n = 0.
class WidthSequence {
public:
  WidthSequence(WidthKind kind, std::vector<double> values) : kind_(kind), values_(std::move(values)) {
    if (values_.empty()) throw ValidationError("width sequence is empty");
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!(values_[i] >= 0.0)) throw ValidationError("widths must be nonnegative");
      if (i > 0 && values_[i] > values_[i - 1]) throw ValidationError("widths must be nonincreasing");
    }
  }

  WidthKind kind() const { return kind_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double at(std::size_t n) const {
    if (n >= values_.size())
      throw TruncationError("width index " + std::to_string(n) + " beyond stored length " +
                            std::to_string(values_.size()));
    return values_[n];
  }

private:
  WidthKind kind_;
  std::vector<double> values_;
};

/// Hilbert case: a_n = c_n = σ_{n+1} = sqrt(λ_{n+1}).
inline WidthSequence widths_from_eigenvalues(const EigenSequence& eigs, WidthKind kind) {
  if (kind == WidthKind::sampling_linear)
    throw UnsupportedError("sampling widths e_n have no closed form; estimate them with the sampler");
  std::vector<double> w;
  w.reserve(eigs.size());
  for (double lambda : eigs.values()) w.push_back(std::sqrt(lambda));
  return WidthSequence(kind, std::move(w));
}

/// n^all(ε) = min{n : c_n <= ε} over the stored range.
inline std::size_t n_all(const WidthSequence& widths, double eps) {
  if (widths.kind() != WidthKind::gelfand)
    throw DomainError("n_all needs Gelfand widths, got " + to_string(widths.kind()));
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("epsilon must lie in (0,1), got " + format_real(eps));
  const auto& v = widths.values();
  for (std::size_t n = 0; n < v.size(); ++n)
    if (v[n] <= eps) return n;
  throw TruncationError("no stored Gelfand width is <= " + format_real(eps) + " (stored " +
                        std::to_string(v.size()) + " entries, last " + format_real(v.back()) + ")");
}

/// Model space plus requested length, as read from key-value configuration
/// (keys: family, omega, c, kappa, values, d, count, basis).
struct SpaceConfig {
  ModelSpace space;
  std::size_t count;
};

namespace detail {

inline double parse_real(const std::map<std::string, std::string>& kv, const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw ValidationError("missing configuration key '" + key + "'");
  try {
    std::size_t used = 0;
    double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(it->second);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("configuration key '" + key + "' is not a number: '" + it->second + "'");
  }
}

inline std::size_t parse_count(const std::map<std::string, std::string>& kv, const std::string& key,
                               std::size_t fallback) {
  auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  try {
    std::size_t used = 0;
    long long v = std::stoll(it->second, &used);
    if (used != it->second.size() || v < 1) throw std::invalid_argument(it->second);
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw ValidationError("configuration key '" + key + "' must be a positive integer, got '" +
                          it->second + "'");
  }
}

} // namespace detail

inline SpaceConfig model_space_from_config(const std::map<std::string, std::string>& kv) {
  auto fam = kv.find("family");
  if (fam == kv.end()) throw ValidationError("missing configuration key 'family'");

  Family family = Geometric{0.5};
  if (fam->second == "geometric") {
    family = Geometric{detail::parse_real(kv, "omega")};
  } else if (fam->second == "stretched-exponential") {
    family = StretchedExponential{detail::parse_real(kv, "c"), detail::parse_real(kv, "kappa")};
  } else if (fam->second == "explicit") {
    auto it = kv.find("values");
    if (it == kv.end()) throw ValidationError("explicit family needs key 'values'");
    ExplicitList list;
    std::stringstream ss(it->second);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        list.values.push_back(std::stod(item));
      } catch (const std::exception&) {
        throw ValidationError("bad eigenvalue '" + item + "' in 'values'");
      }
    }
    family = std::move(list);
  } else {
    throw ValidationError("unknown family '" + fam->second +
                          "' (expected geometric, stretched-exponential or explicit)");
  }

  BasisKind basis = BasisKind::none;
  if (auto b = kv.find("basis"); b != kv.end()) {
    if (b->second == "trigonometric" || b->second == "trig") basis = BasisKind::trigonometric;
    else if (b->second == "legendre") basis = BasisKind::legendre;
    else if (b->second != "none") throw ValidationError("unknown basis '" + b->second + "'");
  }

  const std::size_t d = detail::parse_count(kv, "d", 1);
  const std::size_t count = detail::parse_count(kv, "count", 16);
  return SpaceConfig{ModelSpace(d, std::move(family), basis), count};
}

} // namespace wtl::spaces
