#pragma once

// Closed-form regret and deviation bounds for Gaussian arms.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "gauss_ts/bandit.hpp"
#include "gauss_ts/errors.hpp"
#include "gauss_ts/posterior.hpp"
#include "gauss_ts/special_fn.hpp"

namespace gauss_ts {

/// Smallest KL divergence from N(mu_i, sigma2) to a normal whose mean is
/// `delta` higher: ½ ln(1 + delta²/sigma2).
inline double d_inf(double delta, double sigma2) {
  if (!(sigma2 > 0.0)) {
    throw domain_error("d_inf: sigma2 must be positive, got " + std::to_string(sigma2));
  }
  return 0.5 * std::log1p(delta * delta / sigma2);
}

/// Chi-squared deviation rate (x - 1 - ln x)/2.
inline double h(double x) {
  if (!(x > 0.0)) throw domain_error("h: argument must be positive, got " + std::to_string(x));
  const double u = x - 1.0;
  return 0.5 * (u - std::log1p(u));
}

/// Pr[sample mean of n draws >= mu_i + delta] <= exp(-n delta² / (2 sigma2)).
inline double ldp_mean_bound(std::uint64_t n, double delta, double sigma2) {
  if (n < 1) throw domain_error("ldp_mean_bound: n must be >= 1");
  if (!(delta > 0.0)) throw domain_error("ldp_mean_bound: delta must be positive");
  if (!(sigma2 > 0.0)) throw domain_error("ldp_mean_bound: sigma2 must be positive");
  return std::exp(-static_cast<double>(n) * delta * delta / (2.0 * sigma2));
}

/// Pr[ssq >= n sigma2_thresh] <= exp(-n h(sigma2_thresh / sigma2)).
inline double ldp_var_bound(std::uint64_t n, double sigma2_thresh, double sigma2) {
  if (n < 2) throw domain_error("ldp_var_bound: n must be >= 2");
  if (!(sigma2 > 0.0)) throw domain_error("ldp_var_bound: sigma2 must be positive");
  if (!(sigma2_thresh > sigma2)) {
    throw domain_error("ldp_var_bound: threshold must exceed the true variance");
  }
  return std::exp(-static_cast<double>(n) * h(sigma2_thresh / sigma2));
}

/// Non-negative extended real: either a finite value or +infinity.
class RateValue {
 public:
  static RateValue finite(double v) { return RateValue(false, v); }
  static RateValue infinity() { return RateValue(true, 0.0); }

  bool is_infinite() const noexcept { return infinite_; }
  double value() const {
    if (infinite_) throw std::logic_error("RateValue: value() on +infinity");
    return value_;
  }
  /// IEEE encoding, for printing and comparisons.
  double as_double() const noexcept {
    return infinite_ ? std::numeric_limits<double>::infinity() : value_;
  }

 private:
  RateValue(bool inf, double v) : infinite_(inf), value_(v) {}
  bool infinite_;
  double value_;
};

/// Legendre transform of the cumulant generating function of (X, X²), X ~ N(mu, sigma2).
inline RateValue ldp_rate_function(double z1, double z2, double mu, double sigma2) {
  if (!(sigma2 > 0.0)) throw domain_error("ldp_rate_function: sigma2 must be positive");
  const double spread = z2 - z1 * z1;
  if (!(spread > 0.0)) return RateValue::infinity();
  return RateValue::finite(h(spread / sigma2) + (z1 - mu) * (z1 - mu) / (2.0 * sigma2));
}

struct ArmCoefficient {
  std::size_t arm;
  double coefficient;  // Δ_i / D_inf(Δ_i, σ_i²)
};

/// Per-arm asymptotic regret coefficients; `total` multiplies log T.
struct BoundReport {
  std::vector<ArmCoefficient> arms;
  double total = 0.0;
  std::optional<double> finite_time_bound;
};

inline BoundReport lower_bound_coefficient(const Environment& env) {
  if (!env.has_unique_optimum()) {
    throw infeasible_parameter("lower bound degenerate: environment has " +
                               std::to_string(env.optimal_count()) + " optimal arms");
  }
  BoundReport r;
  for (std::size_t i = 0; i < env.size(); ++i) {
    const double gap = env.gaps()[i];
    if (gap <= 0.0) continue;
    const double c = gap / d_inf(gap, env.arm(i).sigma2);
    r.arms.push_back({i, c});
    r.total += c;
  }
  return r;
}

/// Additive pieces of the finite-time upper bound, in normalized units
/// (optimal arm shifted and scaled to mean 0, variance 1).
struct Lemma5Breakdown {
  struct Arm {
    std::size_t arm;
    double gap;        // normalized Δ_i
    double sigma2;     // normalized σ_i²
    double main;       // log T / D_inf(Δ_i - 2ε, σ_i² + ε)
    double constant;   // 2 - 2α
    double ratio;      // sqrt(σ_i² + ε) / (Δ_i - 2ε)
    double mean_geo;   // 1 / (1 - e^{-ε²/(2σ_i²)})
    double var_geo;    // 1 / (1 - e^{-h(1 + ε/σ_i²)})
    double sum() const { return main + constant + ratio + mean_geo + var_geo; }
  };
  std::vector<Arm> arms;
  double gap_max = 0.0;
  // Δ_max group
  double optimal_mean_geo = 0.0;  // 1 / (1 - e^{-ε²/8})
  double optimal_var_geo = 0.0;   // 1 / (1 - e^{-h(2)})
  double beta_term = 0.0;         // B(1/2, -α) / (1 - e^{-ε²/2})²
  double tail_term = 0.0;         // (2√2/ε) (1+ε²/8)^{1-α} / (1 - (1+ε²/8)^{-1/2})
  double scale = 1.0;             // σ of the optimal arm; multiplies the normalized total

  double normalized_total() const {
    double s = 0.0;
    for (const auto& a : arms) s += a.gap * a.sum();
    return s + gap_max * (optimal_mean_geo + optimal_var_geo + beta_term + tail_term);
  }
  double total() const { return scale * normalized_total(); }
};

namespace detail {
// 1 / (1 - e^{-x}) for x > 0, accurate for small x.
inline double inv_one_minus_exp_neg(double x) { return -1.0 / std::expm1(-x); }
}  // namespace detail

/// Finite-time upper bound on expected regret for alpha < 0.
///
/// The environment is normalized internally so that the optimal arm has mean 0
/// and variance 1; `epsilon` is interpreted in those normalized units and must
/// satisfy 0 < epsilon < min_i Δ_i/2. The result is in the original reward units.
///
/// The first Δ_max term uses e^{-ε²/8}; a looser rendering with e^{-ε²/2} in
/// that position is smaller, so the value here is the more conservative one.
inline Lemma5Breakdown lemma5_breakdown(const Environment& env, double alpha, double epsilon,
                                        double horizon) {
  if (!(alpha < 0.0)) {
    throw infeasible_parameter("alpha infeasible: B(1/2, -alpha) requires alpha < 0, got " +
                               std::to_string(alpha));
  }
  if (!env.has_unique_optimum()) {
    throw infeasible_parameter("finite-time bound requires a unique optimal arm");
  }
  if (!(horizon >= 1.0)) throw domain_error("finite-time bound requires T >= 1");

  const auto& best = env.arm(env.best_arm());
  const double scale = std::sqrt(best.sigma2);

  Lemma5Breakdown b;
  b.scale = scale;
  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < env.size(); ++i) {
    const double gap = env.gaps()[i] / scale;
    if (gap <= 0.0) continue;
    min_gap = std::min(min_gap, gap);
    b.gap_max = std::max(b.gap_max, gap);
    Lemma5Breakdown::Arm a{};
    a.arm = i;
    a.gap = gap;
    a.sigma2 = env.arm(i).sigma2 / best.sigma2;
    b.arms.push_back(a);
  }
  if (!(epsilon > 0.0) || !(epsilon < min_gap / 2.0)) {
    throw infeasible_parameter("epsilon infeasible: need 0 < epsilon < " +
                               std::to_string(min_gap / 2.0) + " (normalized units), got " +
                               std::to_string(epsilon));
  }

  const double log_t = std::log(horizon);
  const double eps2 = epsilon * epsilon;
  for (auto& a : b.arms) {
    a.main = log_t / d_inf(a.gap - 2.0 * epsilon, a.sigma2 + epsilon);
    a.constant = 2.0 - 2.0 * alpha;
    a.ratio = std::sqrt(a.sigma2 + epsilon) / (a.gap - 2.0 * epsilon);
    a.mean_geo = detail::inv_one_minus_exp_neg(eps2 / (2.0 * a.sigma2));
    a.var_geo = detail::inv_one_minus_exp_neg(h(1.0 + epsilon / a.sigma2));
  }

  b.optimal_mean_geo = detail::inv_one_minus_exp_neg(eps2 / 8.0);
  b.optimal_var_geo = detail::inv_one_minus_exp_neg(h(2.0));
  const double denom = std::expm1(-eps2 / 2.0);
  b.beta_term = std::exp(ln_beta(0.5, -alpha)) / (denom * denom);
  const double l = std::log1p(eps2 / 8.0);
  b.tail_term = (2.0 * std::numbers::sqrt2 / epsilon) * std::exp((1.0 - alpha) * l) /
                (-std::expm1(-0.5 * l));
  return b;
}

inline double lemma5_upper_bound(const Environment& env, double alpha, double epsilon,
                                 double horizon) {
  return lemma5_breakdown(env, alpha, epsilon, horizon).total();
}

/// C_T = (A_{n,alpha} T / ln 2)^{1/((n-1)/2 + alpha)} - 1. Negative when
/// A T / ln 2 < 1; returned as is.
inline double theorem2_ct(std::uint64_t n, double alpha, double horizon) {
  if (!(alpha >= 0.0)) throw domain_error("theorem2_ct: requires alpha >= 0");
  if (n < derive_n0(alpha)) {
    throw domain_error("theorem2_ct: requires n >= n0 = " + std::to_string(derive_n0(alpha)));
  }
  if (!(horizon >= 1.0)) throw domain_error("theorem2_ct: requires T >= 1");
  const double power = 0.5 * (static_cast<double>(n) - 1.0) + alpha;
  const double ln_base =
      std::log(tail_constant(n, alpha)) + std::log(horizon) - std::log(std::numbers::ln2);
  return std::expm1(ln_base / power);
}

}  // namespace gauss_ts
