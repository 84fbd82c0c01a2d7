#pragma once

// Randomized and grid verification of the auxiliary inequalities and of the
// transfer chain, each side computed by an independent route.

#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "wtl/model_spaces.hpp"
#include "wtl/numeric.hpp"
#include "wtl/oracles.hpp"
#include "wtl/sampler.hpp"
#include "wtl/transfer.hpp"

namespace wtl::verify {

struct VerifyOptions {
  std::uint64_t seed = 20220613;
  /// Random tuples per randomized suite; 0 selects 200 / 200 / 1000.
  std::size_t samples = 0;
  /// Harness self-test hook: every upper bound is multiplied by this factor.
  double fault_scale = 1.0;
};

struct SuiteResult {
  std::string name;
  std::size_t cases = 0;
  std::size_t violations = 0;
  std::string counterexample;  ///< first violating tuple
  double seconds = 0.0;

  bool passed() const { return violations == 0 && cases > 0; }
};

namespace detail {

class Suite {
public:
  explicit Suite(std::string name) : start_(std::chrono::steady_clock::now()) { result_.name = std::move(name); }

  /// Records one case; `describe` is only called for the first violation.
  template <typename Describe>
  void check(bool ok, Describe&& describe) {
    ++result_.cases;
    if (ok) return;
    if (result_.violations++ == 0) result_.counterexample = describe();
  }

  SuiteResult finish() {
    result_.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    return result_;
  }

private:
  SuiteResult result_;
  std::chrono::steady_clock::time_point start_;
};

inline double uniform_in(sampler::Rng& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

inline double log_uniform_in(sampler::Rng& rng, double lo, double hi) {
  return std::exp(uniform_in(rng, std::log(lo), std::log(hi)));
}

inline std::string tuple(std::initializer_list<std::pair<const char*, double>> kv) {
  std::ostringstream os;
  os << '(';
  bool first = true;
  for (const auto& [k, v] : kv) {
    os << (first ? "" : ", ") << k << '=' << format_real(v);
    first = false;
  }
  os << ')';
  return os.str();
}

} // namespace detail

/// Direct tail sums against the closed-form tail bound, for random
/// (A, B) in [0.5,4] x [0.25,3] and the 5 smallest admissible n.
inline SuiteResult verify_tail_sum(const VerifyOptions& opt) {
  detail::Suite suite("tail-sum bound");
  sampler::Rng rng(sampler::derive_seed(opt.seed, 1));
  const std::size_t count = opt.samples ? opt.samples : 200;
  for (std::size_t i = 0; i < count; ++i) {
    const double A = detail::uniform_in(rng, 0.5, 4.0);
    const double B = detail::uniform_in(rng, 0.25, 3.0);
    const double threshold =
        std::max(transfer::series_integral_threshold(A, B), transfer::integral_tail_threshold(A, B));
    const auto n_min = static_cast<std::uint64_t>(std::max(1.0, std::ceil(threshold)));
    for (std::uint64_t n = n_min; n < n_min + 5; ++n) {
      const double direct = transfer::tail_sum_direct(A, B, n);
      const double bound = transfer::tail_sum_bound(A, B, n) * opt.fault_scale;
      suite.check(holds_le(direct, bound), [&] {
        return detail::tuple({{"A", A}, {"B", B}, {"n", static_cast<double>(n)}, {"direct", direct}, {"bound", bound}});
      });
    }
  }
  return suite.finish();
}

/// Γ(a, x) from closed forms or quadrature against max(a,1) x^{a-1} e^{-x}
/// for random x > max(a,1)(1 + 1e-6). Compared after scaling both by e^x.
inline SuiteResult verify_incomplete_gamma(const VerifyOptions& opt) {
  detail::Suite suite("incomplete-gamma bound");
  sampler::Rng rng(sampler::derive_seed(opt.seed, 2));
  const std::size_t count = opt.samples ? opt.samples : 200;
  for (std::size_t i = 0; i < count; ++i) {
    double a = detail::uniform_in(rng, 0.05, 8.0);
    const double kind = rng.uniform();
    if (kind < 0.1) a = std::ceil(a);               // integer: closed form
    else if (kind < 0.2) a = std::floor(a) + 0.5;   // half-integer: closed form
    const double base = std::max(a, 1.0) * (1.0 + 1e-6);
    const double x = base + 40.0 * std::pow(rng.uniform(), 2.0);
    const double oracle = oracles::scaled_upper_gamma(a, x);
    const double bound = transfer::incomplete_gamma_upper_scaled(a, x) * opt.fault_scale;
    suite.check(holds_le(oracle, bound), [&] {
      return detail::tuple({{"a", a}, {"x", x}, {"gamma_scaled", oracle}, {"bound_scaled", bound}});
    });
  }
  return suite.finish();
}

/// n^u exp(-(n/A)^{1/B}) <= A^u δ^{-uB} exp((uBδ-1)(n/A)^{1/B}) in log
/// form for random positive tuples; n is drawn through y = (n/A)^{1/B}.
inline SuiteResult verify_power_exp(const VerifyOptions& opt) {
  detail::Suite suite("power-exp bound");
  sampler::Rng rng(sampler::derive_seed(opt.seed, 3));
  const std::size_t count = opt.samples ? opt.samples : 1000;
  const double log_fault = std::log(opt.fault_scale);
  for (std::size_t i = 0; i < count; ++i) {
    const double u = detail::log_uniform_in(rng, 1e-2, 1e2);
    const double delta = detail::log_uniform_in(rng, 1e-2, 1e2);
    const double A = detail::log_uniform_in(rng, 1e-2, 1e2);
    const double B = detail::log_uniform_in(rng, 0.05, 20.0);
    const double y = detail::log_uniform_in(rng, 1e-2, 50.0);
    const double n = A * std::pow(y, B);
    // Direct evaluation of both sides, written independently of power_exp_bound_log.
    const double lhs = u * std::log(n) - y;
    const double rhs = u * std::log(A) - u * B * std::log(delta) + (u * B * delta - 1.0) * y + log_fault;
    const auto lib = transfer::power_exp_bound_log(u, delta, A, B, n);
    const bool agree = std::abs(lib.lhs - lhs) <= 1e-9 * std::max(1.0, std::abs(lhs)) &&
                       std::abs(lib.rhs - (rhs - log_fault)) <= 1e-9 * std::max(1.0, std::abs(rhs));
    suite.check(agree && holds_le_log(lhs, rhs), [&] {
      return detail::tuple({{"u", u}, {"delta", delta}, {"A", A}, {"B", B}, {"n", n}, {"log_lhs", lhs}, {"log_rhs", rhs}});
    });
  }
  return suite.finish();
}

/// Exact reduction of the dimension-dependent transfers to the
/// single-profile bound on a 32 x 21 grid (bit-identical reals).
inline SuiteResult verify_reductions(const VerifyOptions& opt) {
  detail::Suite suite("reduction identities");
  const transfer::BoundConstants consts{};
  const double scale = opt.fault_scale;
  for (std::uint64_t d = 1; d <= 32; ++d) {
    for (int k = 1; k <= 21; ++k) {
      const auto eps = Epsilon::from_log_inverse(k);
      const auto cor = transfer::corollary_main_bound(1.0, 1.0, 1.0, consts, d, eps);
      const transfer::ComplexityProfile p{1.0 * std::pow(static_cast<double>(d), 1.0) + 1.0, 1.0};
      const double direct = transfer::n_std_bound_real(p, consts, eps) * scale;
      suite.check(cor.real == direct, [&] {
        return detail::tuple({{"form", 5}, {"d", static_cast<double>(d)}, {"k", static_cast<double>(k)},
                              {"corollary", cor.real}, {"direct", direct}});
      });
      if (d >= 2) {
        const auto q = transfer::qpt_transfer_bound(1.0, 1.0, consts, d, eps);
        const double dd = static_cast<double>(d);
        const transfer::ComplexityProfile pq{1.0 * std::exp(1.0) * std::pow(dd, 1.0), 1.0 * ln_plus(dd)};
        const double direct_q = transfer::n_std_bound_real(pq, consts, eps) * scale;
        suite.check(q.real == direct_q, [&] {
          return detail::tuple({{"form", 6}, {"d", dd}, {"k", static_cast<double>(k)}, {"qpt", q.real},
                                {"direct", direct_q}});
        });
      }
    }
  }
  return suite.finish();
}

/// Profiles used by the chain suites.
inline std::vector<transfer::ComplexityProfile> chain_profiles() {
  std::vector<transfer::ComplexityProfile> out;
  for (double A : {1.0, 2.0, 3.5, 10.0, 100.0})
    for (double B : {0.25, 0.5, 1.0, 1.5, 2.0, 3.0}) out.push_back({A, B});
  return out;
}

/// Standard information is never cheaper: n_std >= n_all bound - 1.
inline SuiteResult verify_dominance(const VerifyOptions& opt) {
  detail::Suite suite("dominance");
  const transfer::BoundConstants consts{};
  for (const auto& p : chain_profiles()) {
    for (int k = 1; k <= 32; ++k) {
      const auto eps = Epsilon::from_log_inverse(k);
      const double std_bound = transfer::n_std_bound(p, consts, eps) * opt.fault_scale;
      const double all_bound = transfer::complexity_bound_from_gelfand(p, eps);
      suite.check(std_bound >= all_bound - 1.0, [&] {
        return detail::tuple({{"A", p.A}, {"B", p.B}, {"k", static_cast<double>(k)}, {"n_std", std_bound}, {"n_all", all_bound}});
      });
    }
  }
  return suite.finish();
}

/// The argument behind the explicit constant, step by step:
///  - the sampling-width bound applied to a_k <= (1+√k) e exp(-(k/A)^{1/B})
///    stays below 36 A^{1/2} B_0^{B_0+1} exp(-((n-1)/A)^{1/B}/B_0) for n >= n_0;
///  - at the certified sample count that bound is <= ε;
///  - b times the count is <= 3b A B_0^B R^B (1+ln ε^{-1})^B <= C (1+ln ε^{-1})^B;
///  - R <= ln(36A) B_0^2.
inline SuiteResult verify_transfer_chain(const VerifyOptions& opt) {
  detail::Suite suite("transfer chain");
  const transfer::BoundConstants consts{};
  const double f = opt.fault_scale;
  for (const auto& p : chain_profiles()) {
    if (p.A > 10.0 && p.B > 2.0) continue;  // tail sums beyond 10^8 terms
    const double n0 = std::ceil(transfer::proof_threshold_n0(p));
    auto a = [&](std::uint64_t k) {
      return transfer::pietsch_bound(std::exp(1.0 - std::pow(static_cast<double>(k) / p.A, 1.0 / p.B)), k);
    };
    for (double n : {n0, n0 + 1.0, n0 + 5.0, 2.0 * n0}) {
      const auto dku = transfer::dku_bound(a, static_cast<std::uint64_t>(std::max(n, 2.0)), consts);
      const double bound = transfer::sampling_error_bound(p, n) * f;
      suite.check(holds_le(dku.value, bound), [&] {
        return detail::tuple({{"A", p.A}, {"B", p.B}, {"n", n}, {"dku", dku.value}, {"bound", bound}});
      });
    }
    suite.check(holds_le(transfer::proof_R(p), std::log(36.0 * p.A) * std::pow(transfer::proof_B0(p), 2) * f),
                [&] { return detail::tuple({{"A", p.A}, {"B", p.B}, {"R", transfer::proof_R(p)}}); });
    for (int k = 1; k <= 32; k += 3) {
      const auto eps = Epsilon::from_log_inverse(k);
      const double count = transfer::proof_sample_count(p, eps);
      const double err = transfer::sampling_error_bound(p, count);
      suite.check(holds_le(err, eps.value() * f), [&] {
        return detail::tuple({{"A", p.A}, {"B", p.B}, {"k", static_cast<double>(k)}, {"count", count}, {"error", err}});
      });
      const double sharp = transfer::proof_constant(p, consts) * std::pow(eps.log_factor(), p.B);
      const double stated = transfer::n_std_bound_real(p, consts, eps);
      suite.check(holds_le(static_cast<double>(consts.b) * count, sharp * f) && holds_le(sharp, stated * f), [&] {
        return detail::tuple({{"A", p.A}, {"B", p.B}, {"k", static_cast<double>(k)}, {"count", count},
                              {"sharp", sharp}, {"stated", stated}});
      });
    }
  }
  return suite.finish();
}

/// Hilbert spaces with geometric spectra: exact Gelfand widths stay below
/// the profile-implied bound for the smallest profile (B fixed) that covers
/// the exact n^all, and the Pietsch proxy dominates the exact linear widths.
inline SuiteResult verify_hilbert_chain(const VerifyOptions& opt) {
  detail::Suite suite("hilbert chain");
  for (double omega : {0.05, 0.25, 0.5, 0.9}) {
    const auto eigs = spaces::univariate_eigenvalues(spaces::Geometric{omega}, 400);
    const auto c = spaces::widths_from_eigenvalues(eigs, spaces::WidthKind::gelfand);
    for (double B : {1.0, 2.0}) {
      // n^all(ε) = n on [c_n, c_{n-1}); the ratio n / (1+ln ε^{-1})^B peaks at ε = c_n.
      double A = 1.0;
      for (std::size_t n = 1; n < c.size(); ++n)
        if (c.at(n) < 1.0) A = std::max(A, static_cast<double>(n) / std::pow(1.0 - std::log(c.at(n)), B));
      const transfer::ComplexityProfile p{A, B};
      for (std::size_t n = static_cast<std::size_t>(std::ceil(A)); n < c.size(); ++n) {
        const double bound = transfer::gelfand_bound_from_profile(p, static_cast<double>(n)) * opt.fault_scale;
        suite.check(holds_le(c.at(n), bound), [&] {
          return detail::tuple({{"omega", omega}, {"A", A}, {"B", B}, {"n", static_cast<double>(n)}, {"c_n", c.at(n)}, {"bound", bound}});
        });
      }
    }
    for (std::size_t n = 1; n < c.size(); ++n) {
      const double proxy = transfer::pietsch_bound(c.at(n), n) * opt.fault_scale;
      suite.check(c.at(n) <= proxy || c.at(n) == 0.0, [&] {
        return detail::tuple({{"omega", omega}, {"n", static_cast<double>(n)}, {"a_n", c.at(n)}, {"proxy", proxy}});
      });
    }
  }
  return suite.finish();
}

inline std::vector<SuiteResult> run_all(const VerifyOptions& opt) {
  return {verify_tail_sum(opt),  verify_incomplete_gamma(opt), verify_power_exp(opt), verify_reductions(opt),
          verify_dominance(opt), verify_transfer_chain(opt),   verify_hilbert_chain(opt)};
}

} // namespace wtl::verify
