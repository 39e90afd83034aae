#pragma once

namespace ssalt::normal {

inline constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;
inline constexpr double kLogSqrt2Pi = 0.918938533204672741780329736406;

double pdf(double z);
double log_pdf(double z);
double cdf(double z);
/// log Phi(z), accurate far into the lower tail (asymptotic series below
/// z = -30) and near 0 for large positive z.
double log_cdf(double z);

/// j-th derivative of Phi for j = 0..3: Phi, phi, -z phi, (z^2 - 1) phi.
double cdf_derivative(int j, double z);

/// Log of the normal density with the given mean and variance.
double log_density(double x, double mean, double variance);

}  // namespace ssalt::normal
