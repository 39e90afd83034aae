#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <vector>

#include "ssalt/optimize.hpp"
#include "ssalt/types.hpp"

namespace ssalt {

/// Log density of a single observation: log P_f for a failure in its
/// recorded piece, log P_C for a censored item.
double observation_log_density(const Observation& obs,
                               const ThetaNatural& theta,
                               const StressPlan& plan);

/// Sample log-likelihood (pairwise summation of the per-item terms).
/// Returns -infinity when any item density is at or below 1e-300.
double log_likelihood(const Dataset& data, const ThetaNatural& theta);

/// How drifts enter the unconstrained vector.
enum class DriftSpace {
  kNatural,  // log mu_X1..log mu_Xm, log mu_Y1..log mu_Ym
  kLink,     // a, b, c, d
};

/// (log mu_X.., log mu_Y.., log sigma_X^2, log sigma_Y^2, atanh rho).
Eigen::VectorXd to_unconstrained(const ThetaNatural& theta);
/// (a, b, c, d, log sigma_X^2, log sigma_Y^2, atanh rho).
Eigen::VectorXd to_unconstrained(const ThetaLink& link);
ThetaLink link_from_unconstrained(const Eigen::VectorXd& z);
/// Inverse of to_unconstrained in either drift space; link-space vectors
/// are mapped to natural drifts at the plan's stresses.
ThetaNatural from_unconstrained(const Eigen::VectorXd& z, DriftSpace space,
                                const StressPlan& plan);

struct FitOptions {
  DriftSpace space = DriftSpace::kLink;
  int starts = 8;
  double jitter = 0.25;  // sd of start perturbations, unconstrained units
  std::uint64_t seed = 20240611;
  opt::Options simplex{2000, 1e-10, 1e-8, 1e-6};
  opt::Options polish{200, 1e-10, 1e-8, 1e-6};
  bool standard_errors = false;
  unsigned threads = 1;
};

struct FitResult {
  ThetaNatural theta_hat;
  std::optional<ThetaLink> theta_link_hat;  // set for link-space fits
  double loglik = 0.0;
  bool converged = false;
  int iterations = 0;
  int best_start = 0;
  /// Sup-norm of the finite-difference gradient of -logL at the optimum in
  /// the optimizer's internal coordinates.
  double gradient_norm = 0.0;
  /// Standard errors of theta_hat (natural order) from the inverse of a
  /// finite-difference observed information matrix.
  std::optional<std::vector<double>> standard_errors;
};

/// Moment-style starting point: drift ~ D / mean failure time per piece,
/// marker drift ~ mean y / mean t, variances and rho from residuals.
ThetaNatural heuristic_start(const Dataset& data);

/// Maximum-likelihood fit by multi-start Nelder-Mead followed by BFGS
/// polishing. Link-space fits need m >= 2 and work internally on the log
/// drifts at S_1 and S_m (an affine image of (a, b), which conditions the
/// search far better than raw a, b).
FitResult fit_mle(const Dataset& data, const ThetaNatural& init,
                  const FitOptions& options = {});
FitResult fit_mle(const Dataset& data, const ThetaLink& init,
                  const FitOptions& options = {});
FitResult fit_mle(const Dataset& data, const FitOptions& options = {});

/// Link parameters (a, b) through log drifts l_1 at S_1 and l_m at S_m.
ThetaLink link_from_log_drifts(double lx1, double lxm, double ly1, double lym,
                               double sigma_x2, double sigma_y2, double rho,
                               const StressPlan& plan);

}  // namespace ssalt
