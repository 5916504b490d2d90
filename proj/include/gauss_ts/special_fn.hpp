#pragma once

// Scalar special functions: log-gamma, the half-step gamma ratio, log-beta and
// the regularized incomplete beta function. Everything here is a pure function.

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "gauss_ts/errors.hpp"

namespace gauss_ts {

/// Bracket e^{-2/3} <= Γ(z+1/2)/Γ(z) <= e^{1/6}·sqrt(z), valid for z >= 1/2.
struct GammaRatioBounds {
  double lower;
  double upper;
};

namespace detail {

// Lanczos approximation, g = 607/128, 14 terms (Godfrey's coefficients).
inline constexpr double kLanczosG = 5.24218750000000000;
inline constexpr double kLanczosC0 = 0.999999999999997092;
inline constexpr std::array<double, 14> kLanczosCoef = {
    57.1562356658629235,     -59.5979603554754912,    14.1360979747417471,
    -0.491913816097620199,   .339946499848118887e-4,  .465236289270485756e-4,
    -.983744753048795646e-4, .158088703224912494e-3,  -.210264441724104883e-3,
    .217439618115212643e-3,  -.164318106536763890e-3, .844182239838527433e-4,
    -.261908384015814087e-4, .368991826595316234e-5};
inline constexpr double kSqrtTwoPi = 2.5066282746310005;

inline constexpr int kBetaMaxIter = 300;
inline constexpr double kBetaTol = 1e-14;
inline constexpr double kTiny = 1e-300;

// Modified Lentz evaluation of the continued fraction for I_x(a,b).
inline double beta_continued_fraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kBetaMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kBetaTol) return h;
  }
  throw convergence_error("incomplete beta continued fraction did not converge (a=" +
                          std::to_string(a) + ", b=" + std::to_string(b) +
                          ", x=" + std::to_string(x) + ")");
}

}  // namespace detail

/// ln Γ(z) for z > 0. Relative error around 1e-15 away from the roots at 1 and 2.
inline double ln_gamma(double z) {
  if (!(z > 0.0) || !std::isfinite(z)) {
    throw domain_error("ln_gamma: argument must be positive and finite, got " +
                       std::to_string(z));
  }
  double y = z;
  double tmp = z + detail::kLanczosG;
  tmp = (z + 0.5) * std::log(tmp) - tmp;
  double ser = detail::kLanczosC0;
  for (double c : detail::kLanczosCoef) ser += c / ++y;
  return tmp + std::log(detail::kSqrtTwoPi * ser / z);
}

/// Γ(z+1/2)/Γ(z), z >= 1/2.
inline double gamma_ratio(double z) {
  if (!(z >= 0.5)) {
    throw domain_error("gamma_ratio: requires z >= 1/2, got " + std::to_string(z));
  }
  return std::exp(ln_gamma(z + 0.5) - ln_gamma(z));
}

inline GammaRatioBounds gamma_ratio_bounds(double z) {
  if (!(z >= 0.5)) {
    throw domain_error("gamma_ratio_bounds: requires z >= 1/2, got " + std::to_string(z));
  }
  return {std::exp(-2.0 / 3.0), std::exp(1.0 / 6.0) * std::sqrt(z)};
}

/// ln B(a,b). Non-positive arguments raise bound_undefined: this is how
/// B(1/2, -alpha) reports alpha >= 0.
inline double ln_beta(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw bound_undefined("ln_beta: arguments must be positive, got a=" + std::to_string(a) +
                          ", b=" + std::to_string(b));
  }
  return ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b);
}

/// I_x(a,b) where the caller also supplies y = 1 - x; passing y separately keeps
/// full precision when x is within rounding of 1.
inline double regularized_incomplete_beta(double a, double b, double x, double y) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw domain_error("regularized_incomplete_beta: a and b must be positive");
  }
  if (!(x >= 0.0 && x <= 1.0) || !(y >= 0.0 && y <= 1.0)) {
    throw domain_error("regularized_incomplete_beta: x must lie in [0,1], got " +
                       std::to_string(x));
  }
  if (x == 0.0) return 0.0;
  if (y == 0.0) return 1.0;
  const double ln_front = a * std::log(x) + b * std::log(y) - ln_beta(a, b);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * detail::beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - front * detail::beta_continued_fraction(b, a, y) / b;
}

inline double regularized_incomplete_beta(double a, double b, double x) {
  return regularized_incomplete_beta(a, b, x, 1.0 - x);
}

}  // namespace gauss_ts
