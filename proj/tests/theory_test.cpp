#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "gauss_ts/rng.hpp"
#include "gauss_ts/stats.hpp"
#include "gauss_ts/theory.hpp"

namespace gauss_ts {
namespace {

TEST(DInf, Examples) {
  EXPECT_EQ(d_inf(0.0, 3.0), 0.0);
  EXPECT_NEAR(d_inf(2.0, 4.0), 0.5 * std::numbers::ln2, 1e-15);
  EXPECT_THROW(d_inf(1.0, 0.0), domain_error);
}

TEST(DInf, LocationScaleInvariance) {
  RngStream rng(11, 0);
  for (int i = 0; i < 1000; ++i) {
    const double delta = 5.0 * rng.uniform();
    const double sigma2 = 0.01 + 10.0 * rng.uniform();
    const double b = std::exp(6.0 * rng.uniform() - 3.0);
    EXPECT_NEAR(d_inf(delta / b, sigma2 / (b * b)), d_inf(delta, sigma2), 1e-12);
  }
}

TEST(H, Examples) {
  EXPECT_EQ(h(1.0), 0.0);
  EXPECT_NEAR(h(2.0), 0.15342640972002734, 1e-15);
  EXPECT_NEAR(h(std::numbers::e), 0.35914091422952262, 1e-15);
  EXPECT_THROW(h(0.0), domain_error);
  EXPECT_GT(h(1.0 + 1e-6), 0.0);
  for (double x = 1.0; x < 10.0; x += 0.25) EXPECT_LT(h(x), h(x + 0.25));
}

TEST(LdpBounds, Examples) {
  EXPECT_NEAR(ldp_mean_bound(8, 1.0, 1.0), 0.018315638888734180, 1e-16);
  EXPECT_NEAR(ldp_mean_bound(8, 1e-9, 1.0), 1.0, 1e-12);
  EXPECT_NEAR(ldp_var_bound(10, 2.0, 1.0), 0.21561430397073495, 1e-15);
  EXPECT_NEAR(ldp_var_bound(10, 1.0 + 1e-9, 1.0), 1.0, 1e-12);
  EXPECT_THROW(ldp_mean_bound(0, 1.0, 1.0), domain_error);
  EXPECT_THROW(ldp_mean_bound(3, 0.0, 1.0), domain_error);
  EXPECT_THROW(ldp_var_bound(1, 2.0, 1.0), domain_error);
  EXPECT_THROW(ldp_var_bound(5, 1.0, 1.0), domain_error);
}

TEST(LdpBounds, MonteCarlo) {
  constexpr int kTrials = 1000000;
  RngStream rng(12, 0);
  int mean_hits = 0;
  int var_hits = 0;
  for (int t = 0; t < kTrials; ++t) {
    SufficientStats a;
    for (int i = 0; i < 8; ++i) a.push(rng.standard_normal());
    mean_hits += a.mean >= 1.0;
    SufficientStats b;
    for (int i = 0; i < 10; ++i) b.push(rng.standard_normal());
    var_hits += b.ssq >= 20.0;
  }
  const auto check = [](int hits, double exact, double bound) {
    const double p = static_cast<double>(hits) / kTrials;
    const double se = std::sqrt(exact * (1 - exact) / kTrials);
    EXPECT_NEAR(p, exact, 4 * se);
    EXPECT_LE(p, bound);
  };
  check(mean_hits, 0.0023388674905236288, ldp_mean_bound(8, 1.0, 1.0));
  check(var_hits, 0.017912404529843298, ldp_var_bound(10, 2.0, 1.0));
}

TEST(RateFunction, Examples) {
  EXPECT_NEAR(ldp_rate_function(0.7, 0.49 + 2.0, 0.7, 2.0).value(), 0.0, 1e-15);
  EXPECT_NEAR(ldp_rate_function(0.0, 2.0, 0.0, 1.0).value(), 0.15342640972002734, 1e-15);
  const auto inf = ldp_rate_function(1.0, 0.5, 0.0, 1.0);
  EXPECT_TRUE(inf.is_infinite());
  EXPECT_THROW(inf.value(), std::logic_error);
  EXPECT_TRUE(std::isinf(inf.as_double()));
  EXPECT_TRUE(ldp_rate_function(1.0, 1.0, 0.0, 1.0).is_infinite());
}

TEST(RateFunction, InfimumOverVarianceSetIsH) {
  const double mu = 0.3;
  const double sigma2 = 1.7;
  for (double ratio : {1.1, 1.5, 2.0, 4.0}) {
    const double s = ratio * sigma2;
    double best = INFINITY;
    for (int i = -500; i <= 500; ++i) {
      const double z1 = mu + 1e-3 * i;
      for (int j = 0; j <= 500; ++j) {
        const double z2 = z1 * z1 + s + 1e-3 * j;
        best = std::min(best, ldp_rate_function(z1, z2, mu, sigma2).value());
      }
    }
    EXPECT_NEAR(best, h(ratio), 1e-6) << ratio;
  }
}

TEST(LowerBound, Examples) {
  const auto r = lower_bound_coefficient(Environment({{0.0, 1.0}, {-1.0, 1.0}}));
  ASSERT_EQ(r.arms.size(), 1u);
  EXPECT_EQ(r.arms[0].arm, 1u);
  EXPECT_NEAR(r.total, 2.8853900817779268, 1e-14);
  EXPECT_NEAR(lower_bound_coefficient(Environment({{0.0, 1.0}, {-1.0, 0.01}})).total,
              0.43335813067106336, 1e-14);
  EXPECT_THROW(lower_bound_coefficient(Environment({{0.0, 1.0}, {0.0, 2.0}})),
               infeasible_parameter);
}

TEST(LowerBound, ScalesLinearly) {
  const Environment env({{0.5, 1.0}, {-1.0, 2.0}, {0.1, 0.3}});
  const double b = 3.0;
  const Environment scaled({{1.5, 9.0}, {-3.0, 18.0}, {0.3, 2.7}});
  EXPECT_NEAR(lower_bound_coefficient(scaled).total, b * lower_bound_coefficient(env).total,
              1e-12);
}

TEST(Lemma5, Goldens) {
  EXPECT_NEAR(lemma5_upper_bound(Environment({{0.0, 1.0}, {-1.0, 1.0}}), -0.5, 0.1, 1e5),
              173165.05948206226, 1e-9 * 173165.05948206226);
  // Scale 2 around a shifted optimum: epsilon is in normalized units.
  EXPECT_NEAR(lemma5_upper_bound(Environment({{3.0, 4.0}, {1.0, 4.0}}), -0.5, 0.05, 1e5),
              4762266.4383038880, 1e-9 * 4762266.4383038880);
}

TEST(Lemma5, Errors) {
  const Environment env({{0.0, 1.0}, {-1.0, 1.0}});
  try {
    lemma5_upper_bound(env, 0.0, 0.1, 1e5);
    FAIL();
  } catch (const infeasible_parameter& e) {
    EXPECT_NE(std::string(e.what()).find("alpha infeasible"), std::string::npos);
  }
  try {
    lemma5_upper_bound(env, -0.5, 0.5, 1e5);
    FAIL();
  } catch (const infeasible_parameter& e) {
    EXPECT_NE(std::string(e.what()).find("epsilon infeasible"), std::string::npos);
  }
  EXPECT_THROW(lemma5_upper_bound(env, -0.5, 0.0, 1e5), infeasible_parameter);
  EXPECT_THROW(lemma5_upper_bound(Environment({{0.0, 1.0}, {0.0, 1.0}}), -0.5, 0.1, 1e5),
               infeasible_parameter);
}

TEST(Lemma5, LogCoefficientDominatesAsymptotically) {
  const Environment env({{0.0, 1.0}, {-1.0, 1.0}});
  const double eps = 0.4;
  const double limit = 1.0 / d_inf(1.0 - 2 * eps, 1.0 + eps);
  double previous = INFINITY;
  for (double t : {1e6, 1e9}) {
    const double ratio = lemma5_upper_bound(env, -0.5, eps, t) / std::log(t) / limit;
    EXPECT_GT(ratio, 1.0);
    EXPECT_LT(ratio, 10.0);
    EXPECT_LT(ratio, previous);
    previous = ratio;
  }
}

TEST(Lemma5, DominatesLowerBound) {
  RngStream rng(13, 0);
  for (int e = 0; e < 200; ++e) {
    const std::size_t k = 2 + rng.uniform_index(4);
    std::vector<ArmParams> arms = {{0.0, 0.1 + 3.9 * rng.uniform()}};
    for (std::size_t i = 1; i < k; ++i) {
      arms.push_back({-(0.1 + 2.9 * rng.uniform()), 0.1 + 3.9 * rng.uniform()});
    }
    const Environment env(arms);
    double min_gap = INFINITY;
    for (double g : env.gaps()) {
      if (g > 0) min_gap = std::min(min_gap, g);
    }
    const double eps = (0.05 + 0.9 * rng.uniform()) * 0.5 * min_gap / std::sqrt(arms[0].sigma2);
    const double alpha = -(0.05 + 0.95 * rng.uniform());
    const double coef = lower_bound_coefficient(env).total;
    for (double t : {1e3, 1e6}) {
      EXPECT_GE(lemma5_upper_bound(env, alpha, eps, t), coef * std::log(t));
    }
  }
}

TEST(TheoremTwoCt, Examples) {
  EXPECT_NEAR(theorem2_ct(3, 0.5, 1e3), 38.004507358834331, 1e-12);
  EXPECT_LT(theorem2_ct(3, 0.5, 1.0), 0.0);
  for (double t : {1e6, 1e8}) {
    EXPECT_NEAR(theorem2_ct(5, 0.0, 100 * t) / theorem2_ct(5, 0.0, t), 10.0, 0.5);
  }
  EXPECT_THROW(theorem2_ct(3, -0.5, 1e3), domain_error);
  EXPECT_THROW(theorem2_ct(2, 0.0, 1e3), domain_error);
  EXPECT_THROW(theorem2_ct(3, 0.0, 0.5), domain_error);
}

}  // namespace
}  // namespace gauss_ts
