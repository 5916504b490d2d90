#pragma once

// Marginal posterior of an arm's mean under the improper prior
// pi(mu, sigma^2) ∝ (sigma^2)^{-1-alpha}. Given (n, mean, ssq) the quantity
// sqrt(n(n+2alpha-1)/ssq)·(mu - mean) is Student-t with n+2alpha-1 degrees
// of freedom, which is all the sampler and the tail probability need.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>

#include "gauss_ts/errors.hpp"
#include "gauss_ts/rng.hpp"
#include "gauss_ts/stats.hpp"

namespace gauss_ts {

/// Initial pulls per arm, max{2, 3 - ceil(2 alpha)}.
inline std::uint64_t derive_n0(double alpha) {
  if (!std::isfinite(alpha)) throw domain_error("derive_n0: alpha must be finite");
  const double v = std::max(2.0, 3.0 - std::ceil(2.0 * alpha));
  return static_cast<std::uint64_t>(v);
}

/// Prior exponent and the forced-exploration count it implies.
struct PriorAlpha {
  double alpha = 0.0;
  std::uint64_t n0 = 3;

  PriorAlpha() = default;
  explicit PriorAlpha(double a) : alpha(a), n0(derive_n0(a)) {}

  /// Posterior degrees of freedom after n observations.
  double dof(std::uint64_t n) const noexcept { return static_cast<double>(n) + 2.0 * alpha - 1.0; }
};

struct PosteriorTailBounds {
  double lower;
  double upper;
  double a_n_alpha;
};

namespace detail {

inline constexpr double kDegenerateRel = 1e-12;

inline void check_posterior_inputs(const SufficientStats& s, const PriorAlpha& prior) {
  if (s.n < prior.n0) {
    throw insufficient_data("posterior needs n >= n0 = " + std::to_string(prior.n0) +
                            " observations, have " + std::to_string(s.n));
  }
  const double n = static_cast<double>(s.n);
  if (!(s.ssq >= kDegenerateRel * std::max(1.0, n * s.mean * s.mean))) {
    throw degenerate_variance("posterior undefined: sum of squares " + std::to_string(s.ssq) +
                              " is degenerate for n=" + std::to_string(s.n));
  }
}

}  // namespace detail

/// One draw of the arm mean from its posterior.
inline double sample_posterior_mean(RngStream& rng, const SufficientStats& stats,
                                    const PriorAlpha& prior) {
  detail::check_posterior_inputs(stats, prior);
  const double nu = prior.dof(stats.n);
  const double scale = std::sqrt(stats.ssq / (static_cast<double>(stats.n) * nu));
  return stats.mean + scale * sample_student_t(rng, nu);
}

/// Posterior probability that the arm mean is at least `mu`.
inline double posterior_tail(const SufficientStats& stats, const PriorAlpha& prior, double mu) {
  detail::check_posterior_inputs(stats, prior);
  const double nu = prior.dof(stats.n);
  const double t = std::sqrt(static_cast<double>(stats.n) * nu / stats.ssq) * (mu - stats.mean);
  return student_t_sf(t, nu);
}

/// A_{n,alpha} = 1 / (2 e^{1/6} sqrt(pi (n/2 + alpha))).
inline double tail_constant(std::uint64_t n, double alpha) {
  const double m = 0.5 * static_cast<double>(n) + alpha;
  if (!(m > 0.0)) throw domain_error("tail_constant: n/2 + alpha must be positive");
  return 1.0 / (2.0 * std::exp(1.0 / 6.0) * std::sqrt(std::numbers::pi * m));
}

/// Lower and upper bounds on posterior_tail for mu above the sample mean:
///   A (1 + g)^{-(n-1)/2 - alpha}  <=  tail  <=  sqrt(ssq)/(mu - mean) (1 + g)^{-n/2 - alpha + 1}
/// with g = n (mu - mean)^2 / ssq. Evaluated in log space.
inline PosteriorTailBounds tail_bounds(const SufficientStats& stats, const PriorAlpha& prior,
                                       double mu) {
  detail::check_posterior_inputs(stats, prior);
  if (!(mu > stats.mean)) {
    throw domain_error("tail_bounds: requires mu > sample mean");
  }
  const double n = static_cast<double>(stats.n);
  const double gap = mu - stats.mean;
  const double log1p_g = std::log1p(n * gap * gap / stats.ssq);
  const double a = tail_constant(stats.n, prior.alpha);
  const double ln_lower = std::log(a) - (0.5 * (n - 1.0) + prior.alpha) * log1p_g;
  const double ln_upper =
      0.5 * std::log(stats.ssq) - std::log(gap) + (-0.5 * n - prior.alpha + 1.0) * log1p_g;
  return {std::exp(ln_lower), std::exp(ln_upper), a};
}

}  // namespace gauss_ts
