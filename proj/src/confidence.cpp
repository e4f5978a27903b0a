#include "prds/confidence.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "prds/error.hpp"

namespace prds {

double ConfidenceParams::z() const {
  if (!(alpha > 0.0) || !(alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  const double p =
      convention == QuantileConvention::kTwoSided ? 1.0 - alpha / 2.0 : 1.0 - alpha;
  return normal_quantile(p);
}

namespace {

// Acklam's rational approximation of the inverse normal CDF.
double acklam(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

}  // namespace

double normal_quantile(double p) {
  if (!(p > 0.0) || !(p < 1.0)) throw DomainError("quantile argument must lie in (0, 1)");
  double x = acklam(p);
  // One Halley step against the exact CDF pushes the error to ~1e-15.
  const double e = normal_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(x * x / 2.0);
  x -= u / (1.0 + x * u / 2.0);
  return x;
}

double quality_lower_bound(std::uint64_t run_length, const ConfidenceParams& params,
                           bool allow_short_run) {
  if (run_length < 1) throw DomainError("run length must be positive");
  if (run_length < 50 && !allow_short_run) {
    throw DomainError("run length " + std::to_string(run_length) +
                      " is below the normal-approximation regime (50)");
  }
  const long double n = static_cast<long double>(run_length);
  const long double z = params.z();
  const long double z2 = z * z;
  // Lower root of the quadratic a*p^2 + b*p + c = 0 for n successes out of
  // n+1 trials. b^2 and 4ac nearly cancel for large n; extended precision
  // keeps the discriminant accurate.
  const long double a = n + z2 + 1.0l;
  const long double b = -(2.0l * n + z2);
  const long double c = n * n / (n + 1.0l);
  long double disc = b * b - 4.0l * a * c;
  if (disc < 0.0l) disc = 0.0l;
  return static_cast<double>((-b - sqrtl(disc)) / (2.0l * a));
}

RequiredRunLength required_run_length(double target, const ConfidenceParams& params) {
  if (!(target > 0.0)) throw DomainError("target quality must be positive");
  if (!(target < 1.0)) {
    throw DomainError("target quality 1 is unreachable with a finite run length");
  }
  const double z2 = params.z() * params.z();
  const double numerator =
      (z2 + 2.0) * target + std::sqrt(z2 * z2 * target * target + 4.0 * z2 * target);
  const double raw = numerator / (2.0 * (1.0 - target));
  RequiredRunLength out;
  out.value = static_cast<std::uint64_t>(std::ceil(raw));
  if (out.value < 1) out.value = 1;
  out.out_of_regime = out.value < 50;
  return out;
}

}  // namespace prds
