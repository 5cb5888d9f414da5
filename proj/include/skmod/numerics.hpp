#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace skmod {

// Invalid or inconsistent configuration values.
struct config_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Parameters violate a structural feasibility condition (e.g. the
// lambda * feedback-snr > 1 error floor), as opposed to being malformed.
struct feasibility_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Gaussian tail probability Q(x) = P(N(0,1) > x).
// Relative error tracks erfc (a few ulp); saturates to 0 past the
// representable range, which is the correct limit inside probability sums.
inline double qfunc(double x) {
  if (!std::isfinite(x)) throw std::domain_error("qfunc: non-finite input");
  return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

// Standard normal density.
inline double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) * (1.0 / std::sqrt(2.0 * std::numbers::pi));
}

namespace detail {

// Rational initial guess for the inverse of the standard normal CDF
// (Acklam's approximation, |rel err| < 1.15e-9), then refined by Newton.
inline double norminv_estimate(double p) {
  static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                  -2.759285104469687e+02, 1.383577518672690e+02,
                                  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                  -1.556989798598866e+02, 6.680131188771972e+01,
                                  -1.328068155288572e+01};
  static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                  -2.400758277161838e+00, -2.549732539343734e+00,
                                  4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double dd[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  if (p < p_low) {
    double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((dd[0] * q + dd[1]) * q + dd[2]) * q + dd[3]) * q + 1.0);
  }
  if (p <= 1.0 - p_low) {
    double q = p - 0.5;
    double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  double q = std::sqrt(-2.0 * std::log(1.0 - p));
  return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
         ((((dd[0] * q + dd[1]) * q + dd[2]) * q + dd[3]) * q + 1.0);
}

}  // namespace detail

// Inverse of qfunc. Two Newton refinements against qfunc itself push the
// round-trip error below 1e-12 relative across p in [1e-12, 1 - 1e-12];
// the scheme evaluates this at arguments as small as pe/(4N) ~ 1e-8, where
// the rational estimate alone would be too coarse for stable gap curves.
inline double qfunc_inv(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("qfunc_inv: p outside (0,1)");
  double x = -detail::norminv_estimate(p);  // Q^{-1}(p) = -Phi^{-1}(p)
  for (int i = 0; i < 2; ++i) {
    double err = qfunc(x) - p;
    double pdf = normal_pdf(x);
    if (pdf == 0.0) break;
    x += err / pdf;
  }
  return x;
}

inline double to_db(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw std::domain_error("to_db: requires finite x > 0");
  return 10.0 * std::log10(x);
}

inline double from_db(double x_db) {
  if (!std::isfinite(x_db)) throw std::domain_error("from_db: non-finite input");
  return std::pow(10.0, x_db / 10.0);
}

// Centered modulo with round-half-up ties: x - d*floor(x/d + 1/2).
// Result lies in [-d/2, d/2); e.g. mod_reduce(1, 2) = -1 because the
// quotient tie 0.5 rounds up.
inline double mod_reduce(double x, double d) {
  if (!(d > 0.0) || !std::isfinite(d)) throw std::domain_error("mod_reduce: requires finite d > 0");
  if (!std::isfinite(x)) throw std::domain_error("mod_reduce: non-finite input");
  double r = x - d * std::floor(x / d + 0.5);
  if (!(r >= -0.5 * d && r < 0.5 * d)) {
    // giant |x|/d loses integer precision in the quotient; reduce once more
    r = r - d * std::floor(r / d + 0.5);
    if (r >= 0.5 * d) r -= d;
    if (r < -0.5 * d) r += d;
  }
  return r;
}

}  // namespace skmod
