#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "wtl/model_spaces.hpp"
#include "wtl/sampler.hpp"

using namespace wtl;
using namespace wtl::spaces;

namespace {

struct Product {
  double value;
  std::vector<std::size_t> index;
};

// Full product grid, sorted by value descending then index ascending.
std::vector<Product> brute_force(const std::vector<std::vector<double>>& factors) {
  std::vector<Product> all{{1.0, {}}};
  bool first = true;
  for (const auto& f : factors) {
    std::vector<Product> next;
    for (const auto& p : all)
      for (std::size_t k = 0; k < f.size(); ++k) {
        auto idx = p.index;
        idx.push_back(k);
        next.push_back({first ? f[k] : p.value * f[k], idx});
      }
    all = std::move(next);
    first = false;
  }
  std::stable_sort(all.begin(), all.end(), [](const Product& a, const Product& b) {
    if (a.value != b.value) return a.value > b.value;
    return a.index < b.index;
  });
  return all;
}

std::vector<double> direct_values(const Family& f, std::size_t len) {
  std::vector<double> v;
  for (std::size_t k = 0; k < len; ++k) {
    if (const auto* g = std::get_if<Geometric>(&f)) v.push_back(std::pow(g->omega, static_cast<double>(k)));
    else if (const auto* s = std::get_if<StretchedExponential>(&f))
      v.push_back(std::exp(-s->c * std::pow(static_cast<double>(k + 1), s->kappa)));
    else v.push_back(std::get<ExplicitList>(f).values.at(k));
  }
  return v;
}

} // namespace

TEST(UnivariateEigenvalues, Geometric) {
  const auto e = univariate_eigenvalues(Geometric{0.5}, 3);
  EXPECT_EQ(e.values(), (std::vector<double>{1.0, 0.5, 0.25}));
  EXPECT_EQ(e.at(1), 1.0);
  EXPECT_THROW(e.at(4), TruncationError);
}

TEST(UnivariateEigenvalues, StretchedExponential) {
  const auto e = univariate_eigenvalues(StretchedExponential{1.0, 1.0}, 2);
  EXPECT_NEAR(e.values()[0], 0.36788, 1e-5);
  EXPECT_NEAR(e.values()[1], 0.13534, 1e-5);
}

TEST(UnivariateEigenvalues, ExplicitListWithTies) {
  const auto e = univariate_eigenvalues(ExplicitList{{0.9, 0.9, 0.1}}, 3);
  EXPECT_EQ(e.values(), (std::vector<double>{0.9, 0.9, 0.1}));
  EXPECT_THROW(univariate_eigenvalues(ExplicitList{{0.9, 0.9, 0.1}}, 4), TruncationError);
}

TEST(UnivariateEigenvalues, RejectsBadParameters) {
  EXPECT_THROW(univariate_eigenvalues(Geometric{1.0}, 3), DomainError);
  EXPECT_THROW(univariate_eigenvalues(Geometric{0.0}, 3), DomainError);
  EXPECT_THROW(univariate_eigenvalues(StretchedExponential{-1.0, 1.0}, 3), DomainError);
  EXPECT_THROW(univariate_eigenvalues(ExplicitList{{0.5, 0.6}}, 2), Error);
  EXPECT_THROW(univariate_eigenvalues(ExplicitList{{0.0}}, 1), Error);
  EXPECT_THROW(ModelSpace(0, Geometric{0.5}), Error);
}

TEST(TensorEigenvalues, Examples) {
  EXPECT_EQ(tensor_top_eigenvalues(ModelSpace(2, Geometric{0.5}), 4).values(),
            (std::vector<double>{1.0, 0.5, 0.5, 0.25}));
  EXPECT_EQ(tensor_top_eigenvalues(ModelSpace(1, Geometric{0.5}), 3).values(),
            (std::vector<double>{1.0, 0.5, 0.25}));
  EXPECT_EQ(tensor_top_eigenvalues(ModelSpace(3, Geometric{0.5}), 5).values(),
            (std::vector<double>{1.0, 0.5, 0.5, 0.5, 0.25}));
}

TEST(TensorEigenvalues, TiesAreLexicographic) {
  const auto terms = tensor_top_terms(ModelSpace(2, Geometric{0.5}), 3);
  EXPECT_EQ(terms[1].index, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(terms[2].index, (std::vector<std::size_t>{1, 0}));
}

TEST(TensorEigenvalues, MatchesBruteForceOracle) {
  const std::vector<Family> families{Geometric{0.5}, Geometric{0.3}, StretchedExponential{0.7, 1.5},
                                     ExplicitList{{1.0, 0.8, 0.8, 0.3, 0.3, 0.3, 0.1, 0.05}}};
  for (std::size_t d = 1; d <= 3; ++d)
    for (std::size_t len = 1; len <= 8; ++len)
      for (std::size_t fi = 0; fi < families.size(); ++fi) {
        // Mix families across coordinates.
        std::vector<Family> factors;
        std::vector<std::vector<double>> values;
        for (std::size_t j = 0; j < d; ++j) {
          const auto& f = families[(fi + j) % families.size()];
          std::vector<double> v = direct_values(f, len);
          factors.push_back(ExplicitList{v});
          values.push_back(v);
        }
        const auto oracle = brute_force(values);
        const std::size_t N = std::min<std::size_t>(64, oracle.size());
        const auto terms = tensor_top_terms(ModelSpace(factors), N);
        ASSERT_EQ(terms.size(), N);
        for (std::size_t i = 0; i < N; ++i) {
          ASSERT_EQ(terms[i].value, oracle[i].value) << "d=" << d << " len=" << len << " i=" << i;
          ASSERT_EQ(terms[i].index, oracle[i].index) << "d=" << d << " len=" << len << " i=" << i;
        }
        if (oracle.size() < 64) EXPECT_THROW(tensor_top_terms(ModelSpace(factors), oracle.size() + 1), RangeError);
      }
}

TEST(TensorEigenvalues, LogSpaceForTinyFactors) {
  // Every factor below 1e-300 after the first; products underflow in linear space.
  const ModelSpace space(4, StretchedExponential{700.0, 1.0});
  const auto terms = tensor_top_terms(space, 6);
  EXPECT_NEAR(terms[0].log_value, -4 * 700.0, 1e-9);
  EXPECT_NEAR(terms[1].log_value, -3 * 700.0 - 1400.0, 1e-9);
  for (std::size_t i = 1; i < terms.size(); ++i) EXPECT_LE(terms[i].log_value, terms[i - 1].log_value);
}

TEST(Widths, FromEigenvalues) {
  const auto w = widths_from_eigenvalues(EigenSequence({1.0, 0.25, 0.0625}, "test"), WidthKind::gelfand);
  EXPECT_EQ(w.values(), (std::vector<double>{1.0, 0.5, 0.25}));
  EXPECT_EQ(widths_from_eigenvalues(EigenSequence({1.0}, "test"), WidthKind::gelfand).at(0), 1.0);
  const auto g = widths_from_eigenvalues(univariate_eigenvalues(Geometric{0.25}, 4), WidthKind::linear);
  EXPECT_EQ(g.values(), (std::vector<double>{1.0, 0.5, 0.25, 0.125}));
  EXPECT_THROW(widths_from_eigenvalues(EigenSequence({1.0}, "test"), WidthKind::sampling_linear), UnsupportedError);
}

TEST(Widths, NAllExamples) {
  std::vector<double> v;
  for (int n = 0; n < 20; ++n) v.push_back(std::ldexp(1.0, -n));
  const WidthSequence c(WidthKind::gelfand, v);
  EXPECT_EQ(n_all(c, 0.3), 2u);
  EXPECT_EQ(n_all(c, 0.999), 1u);
  const WidthSequence small(WidthKind::gelfand, {0.4, 0.2});
  EXPECT_EQ(n_all(small, 0.5), 0u);
  EXPECT_THROW(n_all(c, 1e-9), TruncationError);
  EXPECT_THROW(n_all(c, 1.0), DomainError);
  EXPECT_THROW(n_all(WidthSequence(WidthKind::linear, v), 0.3), DomainError);
}

TEST(Widths, MonotoneAndNAllProperties) {
  const auto eigs = tensor_top_eigenvalues(ModelSpace(3, Geometric{0.4}), 200);
  const auto c = widths_from_eigenvalues(eigs, WidthKind::gelfand);
  for (std::size_t n = 1; n < c.size(); ++n) EXPECT_LE(c.at(n), c.at(n - 1));
  std::size_t prev = 0;
  for (double eps = 0.99; eps > 0.05; eps *= 0.9) {
    const std::size_t n = n_all(c, eps);
    EXPECT_GE(n, prev);
    prev = n;
  }
}

TEST(Widths, ScalingCovariance) {
  const auto base = univariate_eigenvalues(Geometric{0.3}, 30);
  for (double s : {0.25, 0.5, 0.81}) {
    std::vector<double> scaled;
    for (double l : base.values()) scaled.push_back(s * l);
    const auto c = widths_from_eigenvalues(base, WidthKind::gelfand);
    const auto cs = widths_from_eigenvalues(EigenSequence(scaled, "scaled"), WidthKind::gelfand);
    for (std::size_t n = 0; n < c.size(); ++n) EXPECT_NEAR(cs.at(n), std::sqrt(s) * c.at(n), 1e-15);
    // ε chosen off the thresholds so rounding in sqrt(s)·ε cannot move n_all.
    for (double eps : {0.7, 0.33, 0.101, 0.0123}) EXPECT_EQ(n_all(cs, std::sqrt(s) * eps), n_all(c, eps));
  }
}

TEST(Config, ParsesSpaces) {
  auto cfg = model_space_from_config({{"family", "geometric"}, {"omega", "0.25"}, {"d", "2"}, {"count", "5"}});
  EXPECT_EQ(cfg.space.dimension(), 2u);
  EXPECT_EQ(cfg.count, 5u);
  cfg = model_space_from_config({{"family", "explicit"}, {"values", "1,0.5,0.5"}, {"basis", "legendre"}});
  EXPECT_EQ(cfg.space.basis(), BasisKind::legendre);
  EXPECT_THROW(model_space_from_config({{"family", "gaussian"}}), Error);
  EXPECT_THROW(model_space_from_config({{"family", "geometric"}, {"omega", "x"}}), Error);
}
