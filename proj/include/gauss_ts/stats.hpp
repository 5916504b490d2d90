#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "gauss_ts/errors.hpp"
#include "gauss_ts/rng.hpp"
#include "gauss_ts/special_fn.hpp"

namespace gauss_ts {

/// Count, sample mean and centered sum of squares of one arm's rewards.
/// For n < 2 the sum of squares is exactly zero.
struct SufficientStats {
  std::uint64_t n = 0;
  double mean = 0.0;
  double ssq = 0.0;

  /// Welford step. The mean is updated first and the squared term uses both the
  /// old and the new mean, which keeps the result bit-reproducible.
  void push(double x) noexcept {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    ssq += delta * (x - mean);
  }

  /// Sample variance with divisor n (the maximum-likelihood estimate).
  double variance_ml() const noexcept { return n > 0 ? ssq / static_cast<double>(n) : 0.0; }

  friend bool operator==(const SufficientStats&, const SufficientStats&) = default;
};

inline SufficientStats update(SufficientStats stats, double x) noexcept {
  stats.push(x);
  return stats;
}

/// Statistics of the union of two disjoint samples (Chan et al. pairwise update).
inline SufficientStats merge(const SufficientStats& a, const SufficientStats& b) noexcept {
  if (a.n == 0) return b;
  if (b.n == 0) return a;
  const double na = static_cast<double>(a.n);
  const double nb = static_cast<double>(b.n);
  const double n = na + nb;
  const double delta = b.mean - a.mean;
  SufficientStats out;
  out.n = a.n + b.n;
  out.mean = a.mean + delta * (nb / n);
  out.ssq = a.ssq + b.ssq + delta * delta * (na * nb / n);
  return out;
}

inline double sample_normal(RngStream& rng, double mu, double sigma2) {
  if (!(sigma2 > 0.0)) {
    throw domain_error("sample_normal: variance must be positive, got " + std::to_string(sigma2));
  }
  return mu + std::sqrt(sigma2) * rng.standard_normal();
}

/// Gamma(shape, 1) by Marsaglia and Tsang. Shapes below one use
/// Gamma(shape) = Gamma(shape + 1) · U^{1/shape}.
inline double sample_gamma(RngStream& rng, double shape) {
  if (!(shape > 0.0)) {
    throw domain_error("sample_gamma: shape must be positive, got " + std::to_string(shape));
  }
  double boost = 1.0;
  if (shape < 1.0) {
    boost = std::pow(rng.uniform_open(), 1.0 / shape);
    shape += 1.0;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.standard_normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform_open();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return boost * d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return boost * d * v;
  }
}

/// Chi-squared with real-valued degrees of freedom.
inline double sample_chi2(RngStream& rng, double dof) {
  if (!(dof > 0.0)) {
    throw domain_error("sample_chi2: dof must be positive, got " + std::to_string(dof));
  }
  return 2.0 * sample_gamma(rng, 0.5 * dof);
}

/// Z / sqrt(W/dof) with Z ~ N(0,1) and W ~ chi2(dof) independent.
inline double sample_student_t(RngStream& rng, double dof) {
  if (!(dof > 0.0)) {
    throw domain_error("sample_student_t: dof must be positive, got " + std::to_string(dof));
  }
  const double z = rng.standard_normal();
  const double w = sample_chi2(rng, dof);
  return z / std::sqrt(w / dof);
}

/// P(T_dof >= x) through the incomplete beta function:
/// P(|T| >= |x|) = I_{dof/(dof+x^2)}(dof/2, 1/2).
inline double student_t_sf(double x, double dof) {
  if (!(dof > 0.0)) {
    throw domain_error("student_t_sf: dof must be positive, got " + std::to_string(dof));
  }
  if (std::isnan(x)) throw domain_error("student_t_sf: x is NaN");
  if (x == 0.0) return 0.5;
  if (std::isinf(x)) return x > 0 ? 0.0 : 1.0;
  const double x2 = x * x;
  const double denom = dof + x2;
  const double two_sided =
      regularized_incomplete_beta(0.5 * dof, 0.5, dof / denom, x2 / denom);
  const double tail = 0.5 * two_sided;
  return x > 0.0 ? tail : 1.0 - tail;
}

inline double student_t_cdf(double x, double dof) { return student_t_sf(-x, dof); }

}  // namespace gauss_ts
