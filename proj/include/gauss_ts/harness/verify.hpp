#pragma once

// Numerical verification suites for the gamma-ratio inequality, the
// large-deviation bounds, the posterior tail sandwich and the posterior sampler.
// Each suite returns one row per checked grid point.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "gauss_ts/harness/format.hpp"
#include "gauss_ts/posterior.hpp"
#include "gauss_ts/rng.hpp"
#include "gauss_ts/special_fn.hpp"
#include "gauss_ts/stats.hpp"
#include "gauss_ts/theory.hpp"

namespace gauss_ts::harness {

/// lower <= value <= upper must hold; unused sides are infinite.
struct CheckRow {
  std::string point;
  double lower = -std::numeric_limits<double>::infinity();
  double value = 0.0;
  double upper = std::numeric_limits<double>::infinity();

  bool pass() const { return lower <= value && value <= upper; }
  double margin() const { return std::min(value - lower, upper - value); }
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckRow> rows;
  double seconds = 0.0;

  std::size_t failures() const {
    return static_cast<std::size_t>(
        std::count_if(rows.begin(), rows.end(), [](const CheckRow& r) { return !r.pass(); }));
  }
  bool passed() const { return !rows.empty() && failures() == 0; }
};

namespace detail {

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Upper-tail integral of the Student-t density by adaptive Gauss-Kronrod.
// Normalized with std::lgamma so it shares no code with student_t_sf.
inline double t_tail_quadrature(double x0, double nu) {
  const double ln_c = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
                      0.5 * std::log(nu * std::numbers::pi);
  auto density = [&](double x) {
    return std::exp(ln_c - 0.5 * (nu + 1.0) * std::log1p(x * x / nu));
  };
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      density, x0, std::numeric_limits<double>::infinity(), 20, 1e-13, &err);
  if (!(err <= 1e-10)) {
    throw convergence_error("t_tail_quadrature: error estimate " + format_double(err) +
                            " above 1e-10");
  }
  return v;
}

inline double ks_statistic(std::vector<double> draws, const auto& cdf) {
  std::sort(draws.begin(), draws.end());
  const double n = static_cast<double>(draws.size());
  double d = 0.0;
  for (std::size_t i = 0; i < draws.size(); ++i) {
    const double f = cdf(draws[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

}  // namespace detail

/// Exact posterior tail by quadrature of the t density (independent route).
inline double posterior_tail_quadrature(const SufficientStats& stats, const PriorAlpha& prior,
                                        double mu) {
  const double nu = prior.dof(stats.n);
  const double x0 = std::sqrt(static_cast<double>(stats.n) * nu / stats.ssq) * (mu - stats.mean);
  return detail::t_tail_quadrature(x0, nu);
}

/// e^{-2/3} <= Γ(z+½)/Γ(z) <= e^{1/6}√z on z = 0.5 + 0.1k, k = 0..995.
inline SuiteReport verify_lemma1() {
  detail::Stopwatch sw;
  SuiteReport rep{"lemma1", {}, 0.0};
  for (int k = 0; k <= 995; ++k) {
    const double z = 0.5 + 0.1 * k;
    const auto b = gamma_ratio_bounds(z);
    rep.rows.push_back({"z=" + format_double(z), b.lower, gamma_ratio(z), b.upper});
  }
  rep.seconds = sw.seconds();
  return rep;
}

/// Monte Carlo check of the mean and variance deviation bounds. Each n uses its
/// own stream and `trials` samples of size n from N(0, 1). `shrink` divides the
/// bounds (values > 1 are a negative control that must fail).
inline SuiteReport verify_lemma2(std::uint64_t seed, double shrink = 1.0,
                                 std::uint64_t trials = 1000000) {
  detail::Stopwatch sw;
  SuiteReport rep{"lemma2", {}, 0.0};
  const std::uint64_t ns[] = {2, 5, 10, 30};
  const double deltas[] = {0.25, 0.5, 1.0, 2.0};
  const double ratios[] = {1.2, 1.5, 2.0, 4.0};
  const double n_trials = static_cast<double>(trials);
  for (std::uint64_t n : ns) {
    RngStream rng(seed, n);
    std::uint64_t mean_hits[4] = {};
    std::uint64_t var_hits[4] = {};
    const double nd = static_cast<double>(n);
    for (std::uint64_t t = 0; t < trials; ++t) {
      SufficientStats s;
      for (std::uint64_t m = 0; m < n; ++m) s.push(rng.standard_normal());
      for (int j = 0; j < 4; ++j) {
        mean_hits[j] += s.mean >= deltas[j];
        var_hits[j] += s.ssq >= nd * ratios[j];
      }
    }
    auto row = [&](std::string label, std::uint64_t hits, double bound) {
      const double p = static_cast<double>(hits) / n_trials;
      const double se = std::sqrt(p * (1.0 - p) / n_trials);
      return CheckRow{std::move(label), -std::numeric_limits<double>::infinity(), p,
                      bound / shrink + 3.0 * se};
    };
    for (int j = 0; j < 4; ++j) {
      rep.rows.push_back(row("mean n=" + std::to_string(n) + " delta/sigma=" +
                                 format_double(deltas[j]),
                             mean_hits[j], ldp_mean_bound(n, deltas[j], 1.0)));
    }
    for (int j = 0; j < 4; ++j) {
      rep.rows.push_back(row("var n=" + std::to_string(n) + " thresh/sigma2=" +
                                 format_double(ratios[j]),
                             var_hits[j], ldp_var_bound(n, ratios[j], 1.0)));
    }
  }
  rep.seconds = sw.seconds();
  return rep;
}

/// Posterior tail sandwich on n = n0, n0+3, ..., <= 50, alpha in {-1, -0.5, -0.1},
/// standardized gap (mu - mean)/sqrt(ssq/n) in {0.1, 0.5, 1, 2, 4}.
inline SuiteReport verify_lemma3() {
  detail::Stopwatch sw;
  SuiteReport rep{"lemma3", {}, 0.0};
  for (double alpha : {-1.0, -0.5, -0.1}) {
    const PriorAlpha prior(alpha);
    for (std::uint64_t n = prior.n0; n <= 50; n += 3) {
      for (double gap : {0.1, 0.5, 1.0, 2.0, 4.0}) {
        // mean 0 and ssq = n make the standardized gap equal to mu.
        const SufficientStats stats{n, 0.0, static_cast<double>(n)};
        const auto b = tail_bounds(stats, prior, gap);
        rep.rows.push_back({"alpha=" + format_double(alpha) + " n=" + std::to_string(n) +
                                " gap=" + format_double(gap),
                            b.lower, posterior_tail_quadrature(stats, prior, gap), b.upper});
      }
    }
  }
  rep.seconds = sw.seconds();
  return rep;
}

struct PosteriorCase {
  SufficientStats stats;
  double alpha;
};

inline std::vector<PosteriorCase> posterior_cases() {
  return {{{10, 0.0, 9.0}, -0.5}, {{5, 1.5, 2.0}, -0.3}, {{4, -2.0, 0.5}, 0.25}};
}

/// KS distance between posterior draws and the exact posterior CDF, against
/// the 0.001-level critical value 1.95/sqrt(draws).
inline SuiteReport verify_posterior(std::uint64_t seed, std::uint64_t draws = 100000) {
  detail::Stopwatch sw;
  SuiteReport rep{"posterior", {}, 0.0};
  const auto cases = posterior_cases();
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& c = cases[i];
    const PriorAlpha prior(c.alpha);
    RngStream rng(seed, 1000 + i);
    std::vector<double> xs(draws);
    for (auto& x : xs) x = sample_posterior_mean(rng, c.stats, prior);
    const double d = detail::ks_statistic(
        std::move(xs), [&](double mu) { return 1.0 - posterior_tail(c.stats, prior, mu); });
    rep.rows.push_back({"n=" + std::to_string(c.stats.n) + " alpha=" + format_double(c.alpha) +
                            " dof=" + format_double(prior.dof(c.stats.n)),
                        -std::numeric_limits<double>::infinity(), d,
                        1.95 / std::sqrt(static_cast<double>(draws))});
  }
  rep.seconds = sw.seconds();
  return rep;
}

}  // namespace gauss_ts::harness
