#pragma once

#include "ssalt/types.hpp"

namespace ssalt {

/// exp(a + b / (273 + stress)).
double arrhenius(double a, double b, double stress);

/// Maps theta* to the natural per-level drifts at the plan's stresses.
/// Throws DomainError if a drift overflows.
ThetaNatural link_to_natural(const ThetaLink& link, const StressPlan& plan);

/// Stress ratio alpha = ((S1 - S0)(273 + S2)) / ((S2 - S0)(273 + S1)) of a
/// two-level plan; the unique weight for which the log-drift interpolation
/// in use_level_drifts inverts the Arrhenius link exactly.
double stress_ratio(const StressPlan& plan);

struct UseLevelDrifts {
  double mu_x0 = 0.0;
  double mu_y0 = 0.0;
};

/// mu_0 = exp((log mu_1 - alpha log mu_2) / (1 - alpha)) for both the
/// degradation and the marker drift. Requires m = 2, positive drifts.
UseLevelDrifts use_level_drifts(const ThetaNatural& theta, double alpha);

/// Inverse Gaussian first-passage cdf of a Wiener process with drift mu and
/// variance rate sigma2 through threshold D. The exp(2 mu D / sigma2) term
/// is combined with log Phi so it cannot overflow.
double ig_cdf(double t, double mu, double sigma2, double threshold);
/// Matching density D / sqrt(2 pi sigma2 t^3) exp(-(D - mu t)^2/(2 sigma2 t)).
double ig_pdf(double t, double mu, double sigma2, double threshold);
double ig_log_pdf(double t, double mu, double sigma2, double threshold);

/// Accumulated drift sum_{k<j} mu_k (tau_k - tau_{k-1}) + mu_j (t - tau_{j-1})
/// of piece j (1-based) at time t.
double accumulated_drift(const std::vector<double>& mu, const StressPlan& plan,
                         int piece, double t);

struct PieceKernels {
  int piece = 1;
  double mean_x = 0.0;  // mu_j(x, t)
  double mean_y = 0.0;  // mu_j(y, t)
  double q = 0.0;       // y - mu_j(y, t)
  double p = 0.0;       // D - mu_j(x, t)
};

/// Kernels at (t, y). The piece is the j with tau_{j-1} <= t < tau_j (t = C
/// in piece m) unless `piece` is given explicitly, as it is for recorded
/// failures (whose pieces are (tau_{j-1}, tau_j]). The means are continuous
/// in t, so only the label depends on the convention.
PieceKernels piece_kernels(double t, double y, const ThetaNatural& theta,
                           const StressPlan& plan, int piece = 0);

/// Piece-wise inverse Gaussian kernel f_T(t): piece j uses drift mu_Xj at
/// absolute time t. Pieces as in piece_kernels.
double failure_time_density(double t, const ThetaNatural& theta,
                            const StressPlan& plan, int piece = 0);

/// G_j(tau_j) - G_j(tau_{j-1}) with G_j the inverse Gaussian cdf of drift
/// mu_Xj.
double piece_probability(int piece, const ThetaNatural& theta,
                         const StressPlan& plan);
/// 1 - sum_j piece_probability(j): the mass of the survival category.
double survival_probability(const ThetaNatural& theta, const StressPlan& plan);

/// Density of Y(C) given X(C) = x for a surviving item.
double p1_marker_given_x(double y, double x, const ThetaNatural& theta,
                         const StressPlan& plan);
/// Density of Y(T) given T = t.
double p2_marker_given_t(double y, double t, const ThetaNatural& theta,
                         const StressPlan& plan, int piece = 0);
/// Sub-density of X(C) on {T > C}: a normal kernel times the reflection
/// factor 1 - exp(-2D(D - x)/(sigma_X^2 C)); zero for x >= D.
double p3_surviving_x(double x, const ThetaNatural& theta,
                      const StressPlan& plan);

/// Closed-form marker density of a censored item, P_C(y) =
/// c_y [Phi(c11) phi(c12) - e^beta Phi(c21) phi(c22)].
double censored_marker_density(double y, const ThetaNatural& theta,
                               const StressPlan& plan);
/// Log of censored_marker_density, evaluated in log space (the difference
/// uses expm1). Returns -inf where the density is not positive.
double log_censored_marker_density(double y, const ThetaNatural& theta,
                                   const StressPlan& plan);

/// Integral of censored_marker_density over y (adaptive quadrature on
/// mean +/- 12 sd of Y(C)).
double censored_marker_mass(const ThetaNatural& theta, const StressPlan& plan);

/// Both forms of the failing-item joint density of (Y(T), T).
struct FailingDensityForms {
  double product = 0.0;      // p2(y | t) f_T(t)
  double exponential = 0.0;  // D/(2 pi sx sy sqrt(1-rho^2)) t^-2 exp(-Q/t)
};
FailingDensityForms failing_joint_density_forms(double y, double t,
                                                const ThetaNatural& theta,
                                                const StressPlan& plan,
                                                int piece = 0);

/// Joint density of (Y(T), T) for an item failing in piece j; the exponent
/// form with Q_j = eta1 (q - eta2 P)^2 + (D - mu_Xj t)^2 / (2 sigma_X^2).
double failing_joint_density(double y, double t, const ThetaNatural& theta,
                             const StressPlan& plan, int piece = 0);
double log_failing_joint_density(double y, double t, const ThetaNatural& theta,
                                 const StressPlan& plan, int piece = 0);

}  // namespace ssalt
