#include "ssalt/normal.hpp"

#include <cmath>
#include <limits>

#include "ssalt/error.hpp"

namespace ssalt::normal {

namespace {
constexpr double kInvSqrt2 = 0.707106781186547524400844362105;
}

double pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

double log_pdf(double z) { return -0.5 * z * z - kLogSqrt2Pi; }

double cdf(double z) { return 0.5 * std::erfc(-z * kInvSqrt2); }

double log_cdf(double z) {
  if (std::isnan(z)) return z;
  if (z > 5.0) return std::log1p(-0.5 * std::erfc(z * kInvSqrt2));
  if (z > -30.0) return std::log(0.5 * std::erfc(-z * kInvSqrt2));
  if (z == -std::numeric_limits<double>::infinity()) return z;
  // Mills ratio series: Phi(z) = phi(z)/|z| * (1 - 1/z^2 + 3/z^4 - ...).
  const double r = 1.0 / (z * z);
  const double series =
      1.0 - r * (1.0 - 3.0 * r * (1.0 - 5.0 * r * (1.0 - 7.0 * r * (1.0 - 9.0 * r))));
  return log_pdf(z) - std::log(-z) + std::log(series);
}

double cdf_derivative(int j, double z) {
  switch (j) {
    case 0:
      return cdf(z);
    case 1:
      return pdf(z);
    case 2:
      return -z * pdf(z);
    case 3:
      return (z * z - 1.0) * pdf(z);
    default:
      throw DomainError("cdf_derivative: order must be 0..3");
  }
}

double log_density(double x, double mean, double variance) {
  const double r = x - mean;
  return -0.5 * r * r / variance - 0.5 * std::log(variance) - kLogSqrt2Pi;
}

}  // namespace ssalt::normal
