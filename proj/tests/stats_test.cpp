#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "gauss_ts/stats.hpp"

namespace gauss_ts {
namespace {

struct Moments {
  double mean, var;
};

Moments moments(const std::vector<double>& xs) {
  long double s = 0;
  for (double x : xs) s += x;
  const long double m = s / xs.size();
  long double q = 0;
  for (double x : xs) q += (x - m) * (x - m);
  return {static_cast<double>(m), static_cast<double>(q / (xs.size() - 1))};
}

template <class Cdf>
double ks(std::vector<double> xs, Cdf cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

TEST(SufficientStats, UpdateExamples) {
  const auto one = update({}, 5.0);
  EXPECT_EQ(one, (SufficientStats{1, 5.0, 0.0}));
  const auto two = update(update({}, 1.0), 3.0);
  EXPECT_EQ(two, (SufficientStats{2, 2.0, 2.0}));
  SufficientStats s;
  for (double x : {2, 4, 4, 4, 5, 5, 7, 9}) s.push(x);
  EXPECT_EQ(s.n, 8u);
  EXPECT_DOUBLE_EQ(s.mean, 5.0);
  EXPECT_DOUBLE_EQ(s.ssq, 32.0);
}

// Streaming statistics against the two-pass batch formulas (long double).
TEST(SufficientStats, StreamingMatchesBatch) {
  RngStream rng(11, 0);
  for (int trial = 0; trial < 60; ++trial) {
    const auto len = 2 + rng.uniform_index(10000);
    const double offset = trial % 3 == 0 ? 1e6 : (trial % 3 == 1 ? -3.0 : 0.0);
    const double scale = std::pow(10.0, static_cast<double>(rng.uniform_index(7)) - 3.0);
    std::vector<double> xs(len);
    SufficientStats s;
    for (auto& x : xs) {
      x = offset + scale * rng.standard_normal();
      s.push(x);
    }
    long double sum = 0;
    for (double x : xs) sum += x;
    const long double mean = sum / len;
    long double q = 0;
    for (double x : xs) q += (x - mean) * (x - mean);
    EXPECT_NEAR(s.mean, static_cast<double>(mean), 1e-9 * std::max(1.0, std::fabs(s.mean)));
    // Inputs carry absolute error ~eps*|offset|, so the tolerance grows with |offset|/scale.
    const double kappa = std::fabs(offset) / scale;
    EXPECT_NEAR(s.ssq, static_cast<double>(q), (1e-9 + 1e-12 * kappa) * static_cast<double>(q));
  }
}

TEST(SufficientStats, MergeEqualsUnion) {
  RngStream rng(12, 0);
  for (int trial = 0; trial < 50; ++trial) {
    SufficientStats a, b, all;
    const auto na = rng.uniform_index(200), nb = rng.uniform_index(200);
    for (std::uint64_t i = 0; i < na; ++i) {
      const double x = 3.0 + rng.standard_normal();
      a.push(x);
      all.push(x);
    }
    for (std::uint64_t i = 0; i < nb; ++i) {
      const double x = -1.0 + 2.0 * rng.standard_normal();
      b.push(x);
      all.push(x);
    }
    const auto m = merge(a, b);
    EXPECT_EQ(m.n, all.n);
    EXPECT_NEAR(m.mean, all.mean, 1e-9 * std::max(1.0, std::fabs(all.mean)));
    EXPECT_NEAR(m.ssq, all.ssq, 1e-9 * std::max(1.0, all.ssq));
  }
}

TEST(SampleNormal, TinyVarianceConcentrates) {
  RngStream rng(1, 0);
  for (int i = 0; i < 1000; ++i) EXPECT_NEAR(sample_normal(rng, 3.0, 1e-12), 3.0, 1e-4);
  EXPECT_THROW(sample_normal(rng, 0.0, 0.0), domain_error);
  EXPECT_THROW(sample_normal(rng, 0.0, -1.0), domain_error);
}

TEST(SampleNormal, FirstTwoMoments) {
  RngStream rng(2, 0);
  std::vector<double> a(1000000), b(1000000);
  for (auto& x : a) x = sample_normal(rng, 0.0, 1.0);
  for (auto& x : b) x = sample_normal(rng, 0.0, 4.0);
  EXPECT_NEAR(moments(a).mean, 0.0, 0.004);
  EXPECT_NEAR(moments(b).var, 4.0, 0.023);
}

TEST(SampleChi2, MomentsAtThreeDof) {
  RngStream rng(3, 0);
  std::vector<double> xs(1000000);
  for (auto& x : xs) x = sample_chi2(rng, 3.0);
  const auto m = moments(xs);
  EXPECT_NEAR(m.mean, 3.0, 0.01);
  EXPECT_NEAR(m.var, 6.0, 0.05);
  EXPECT_TRUE(std::all_of(xs.begin(), xs.end(), [](double x) { return x >= 0.0; }));
}

TEST(SampleChi2, TwoDofIsExponentialWithMeanTwo) {
  RngStream rng(4, 0);
  std::vector<double> xs(100000);
  for (auto& x : xs) x = sample_chi2(rng, 2.0);
  const double d = ks(xs, [](double x) { return x <= 0 ? 0.0 : -std::expm1(-x / 2.0); });
  EXPECT_LT(d, 1.63 / std::sqrt(1e5));
}

TEST(SampleChi2, SmallShapeUsesBoost) {
  // dof 1.2 -> gamma shape 0.6 < 1.
  RngStream rng(5, 0);
  std::vector<double> xs(400000);
  for (auto& x : xs) x = sample_chi2(rng, 1.2);
  EXPECT_NEAR(moments(xs).mean, 1.2, 4 * std::sqrt(2.4 / 4e5));
  EXPECT_THROW(sample_chi2(rng, 0.0), domain_error);
}

TEST(SampleStudentT, CauchyQuartile) {
  RngStream rng(6, 0);
  std::size_t below = 0, negative = 0;
  constexpr int kN = 1000000;
  for (int i = 0; i < kN; ++i) {
    const double t = sample_student_t(rng, 1.0);
    below += t <= 1.0;
    negative += t < 0.0;
  }
  EXPECT_NEAR(static_cast<double>(below) / kN, 0.75, 0.002);
  EXPECT_NEAR(static_cast<double>(negative) / kN, 0.5, 0.002);
}

TEST(SampleStudentT, VarianceAtFiveDof) {
  RngStream rng(7, 0);
  std::vector<double> xs(1000000);
  for (auto& x : xs) x = sample_student_t(rng, 5.0);
  EXPECT_NEAR(moments(xs).var, 5.0 / 3.0, 0.05);
  EXPECT_THROW(sample_student_t(rng, -1.0), domain_error);
}

TEST(SampleStudentT, KolmogorovSmirnovAgainstExactCdf) {
  for (double nu : {1.5, 2.0, 4.8, 30.0}) {
    RngStream rng(8, static_cast<std::uint64_t>(nu * 10));
    std::vector<double> xs(100000);
    for (auto& x : xs) x = sample_student_t(rng, nu);
    const double d = ks(xs, [nu](double x) { return student_t_cdf(x, nu); });
    EXPECT_LT(d, 1.95 / std::sqrt(1e5)) << "nu=" << nu;
  }
}

TEST(SampleStudentT, DeterministicPerStream) {
  RngStream a(9, 3), b(9, 3);
  for (int i = 0; i < 10000; ++i) {
    const double x = sample_student_t(a, 3.3);
    const double y = sample_student_t(b, 3.3);
    ASSERT_EQ(std::bit_cast<std::uint64_t>(x), std::bit_cast<std::uint64_t>(y));
  }
}

TEST(StudentTSf, KnownValues) {
  for (double nu : {0.5, 1.0, 3.4, 100.0}) EXPECT_EQ(student_t_sf(0.0, nu), 0.5);
  EXPECT_NEAR(student_t_sf(1.0, 1.0), 0.25, 1e-12);  // Cauchy: 1/2 - atan(1)/pi
  // mpmath quadrature of the t_10 density over [2, inf).
  EXPECT_NEAR(student_t_sf(2.0, 10.0), 0.036694017385370183, 1e-9);
  // scipy.stats.t.sf
  EXPECT_NEAR(student_t_sf(2.5, 3.4), 0.03890390402255602, 1e-9);
  EXPECT_NEAR(student_t_sf(-1.3, 1.5), 0.8209853043992096, 1e-9);
  EXPECT_NEAR(student_t_sf(0.3, 1e5), 0.38208888959516885, 1e-9);
  EXPECT_THROW(student_t_sf(1.0, 0.0), domain_error);
}

TEST(StudentTSf, ReflectionAndMonotonicity) {
  for (double nu : {1.0, 2.5, 8.0, 60.0}) {
    double prev = 1.0;
    for (double x = -20.0; x <= 20.0; x += 0.25) {
      const double p = student_t_sf(x, nu);
      EXPECT_NEAR(p + student_t_sf(-x, nu), 1.0, 1e-9);
      EXPECT_LE(p, prev);
      if (prev < 1.0 - 1e-12) {
        EXPECT_LT(p, prev);
      }
      prev = p;
    }
  }
}

}  // namespace
}  // namespace gauss_ts
