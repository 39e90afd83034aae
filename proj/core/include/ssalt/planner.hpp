#pragma once

#include <iosfwd>
#include <vector>

#include "ssalt/fisher.hpp"
#include "ssalt/types.hpp"

namespace ssalt {

/// 100p-th percentile of the inverse Gaussian law with drift mu_x0:
/// the root of ig_cdf(xi) = p, |G_0(xi) - p| < 1e-10.
double percentile(double p, double mu_x0, double sigma_x2, double threshold);

/// Gradient H of G_0(xi_p) with respect to theta in natural order; only the
/// mu_X1, mu_X2 and sigma_X^2 entries are nonzero (G_0 depends on them
/// through mu_X0 of the two-level stress ratio).
Vec7 sensitivity_vector(double xi_p, const ThetaNatural& theta_hat,
                        double alpha, const StressPlan& plan);

struct PlannerOptions {
  int grid_points = 64;
  double epsilon = 1.0;   // search on [epsilon, C - epsilon]
  double tau_tol = 0.01;  // golden-section bracket width
  FisherAssembly assembly = FisherAssembly::kExpectation;
  unsigned threads = 1;
};

/// Delta-method Avar(xi_p) = H' I^-1 H / f_T0(xi_p)^2 with I the Fisher
/// matrix of the plan with change time tau and n items. Returns +infinity
/// when I is not numerically positive definite.
double avar(double tau, double p, const ThetaNatural& theta_hat,
            const StressPlan& plan, int n, const PlannerOptions& options = {});

struct PlanResult {
  double p = 0.0;
  double xi_p = 0.0;
  double tau_star = 0.0;
  double avar = 0.0;
  double cv = 0.0;      // sqrt(avar) / xi_p
  double g1_tau = 0.0;  // G_1(tau*)
  double g2_rem = 0.0;  // G_2(C) - G_2(tau*)
  /// Argmin certificate: the coarse grid and its Avar values.
  std::vector<double> grid_tau;
  std::vector<double> grid_avar;
};

/// tau* = argmin Avar over [epsilon, C - epsilon]: coarse grid, then golden
/// section on the bracket around the best grid point. Throws DomainError if
/// every grid point is infeasible.
PlanResult optimize_tau(double p, const ThetaNatural& theta_hat,
                        const StressPlan& plan, int n,
                        const PlannerOptions& options = {});

std::vector<PlanResult> plan_report(const std::vector<double>& p_grid,
                                    const ThetaNatural& theta_hat,
                                    const StressPlan& plan, int n,
                                    const PlannerOptions& options = {});

/// Table-style CSV: p, xi_p, tau_star, avar, cv, g1_tau, g2_rem.
void write_plan_csv(std::ostream& os, const std::vector<PlanResult>& rows);
/// Plot data: p against tau* and p against C.V.
void write_tau_curve_csv(std::ostream& os, const std::vector<PlanResult>& rows);
void write_cv_curve_csv(std::ostream& os, const std::vector<PlanResult>& rows);

}  // namespace ssalt
