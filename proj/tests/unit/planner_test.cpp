#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "ssalt/error.hpp"
#include "ssalt/fixtures.hpp"
#include "ssalt/fisher.hpp"
#include "ssalt/model.hpp"
#include "ssalt/planner.hpp"

namespace ssalt {
namespace {

StressPlan cell_plan() { return fixtures::example_plan(400); }

double g0_at(double xi, const ThetaNatural& theta, const StressPlan& plan) {
  const auto use = use_level_drifts(theta, stress_ratio(plan));
  return ig_cdf(xi, use.mu_x0, theta.sigma_x2, plan.threshold);
}

double xi_of(double p, const ThetaNatural& theta, const StressPlan& plan) {
  const auto use = use_level_drifts(theta, stress_ratio(plan));
  return percentile(p, use.mu_x0, theta.sigma_x2, plan.threshold);
}

TEST(Percentile, RoundTripAndMonotone) {
  const ThetaNatural theta = fixtures::section5_estimates();
  const StressPlan plan = cell_plan();
  double prev = 0.0;
  for (int i = 1; i <= 9; ++i) {
    const double p = 0.1 * i;
    const double xi = xi_of(p, theta, plan);
    EXPECT_NEAR(g0_at(xi, theta, plan), p, 1e-10);
    EXPECT_GT(xi, prev);
    prev = xi;
  }
  EXPECT_NEAR(xi_of(0.5, theta, plan), 1227.6, 0.03 * 1227.6);
  EXPECT_THROW(percentile(1.0, 0.001, 0.001, 1.0), DomainError);
}

TEST(Sensitivity, RatioZerosAndFiniteDifferences) {
  const ThetaNatural theta = fixtures::section5_estimates();
  const StressPlan plan = cell_plan();
  const double alpha = stress_ratio(plan);
  const double xi = xi_of(0.3, theta, plan);
  const Vec7 h = sensitivity_vector(xi, theta, alpha, plan);
  EXPECT_LT(testing::rel_err(h[1] / h[0],
                             -alpha * theta.mu_x[0] / theta.mu_x[1]),
            1e-12);
  for (int r : {2, 3, 5, 6}) EXPECT_EQ(h[r], 0.0);
  const std::vector<double> base = theta.to_vector();
  for (int r : {0, 1, 4}) {
    auto f = [&](double v) {
      std::vector<double> x = base;
      x[r] = v;
      return g0_at(xi, ThetaNatural::from_vector(x), plan);
    };
    const double fd = testing::richardson_first(f, base[r], 1e-3 * base[r]);
    EXPECT_LT(testing::rel_err(h[r], fd), 1e-5) << r;
  }
}

TEST(Avar, ScalingAndReferencePoint) {
  const ThetaNatural theta = fixtures::section5_estimates();
  const StressPlan plan = cell_plan();
  const double a29 = avar(570.0, 0.1, theta, plan, 29);
  const double a58 = avar(570.0, 0.1, theta, plan, 58);
  EXPECT_GT(a29, 0.0);
  EXPECT_LT(testing::rel_err(a58, 0.5 * a29), 1e-10);
  const double cv = std::sqrt(a29) / xi_of(0.1, theta, plan);
  EXPECT_NEAR(cv, 1.102, 0.1 * 1.102);
}

TEST(OptimizeTau, ReferenceRows) {
  const ThetaNatural theta = fixtures::section5_estimates();
  const StressPlan plan = cell_plan();
  const PlanResult low = optimize_tau(0.1, theta, plan, 29);
  EXPECT_NEAR(low.tau_star, 570.66, 5.0);
  EXPECT_NEAR(low.g1_tau, 0.3197, 0.02);
  const PlanResult mid = optimize_tau(0.5, theta, plan, 29);
  EXPECT_NEAR(mid.tau_star, 579.29, 5.0);
}

TEST(OptimizeTau, CertificateAndIdentities) {
  const ThetaNatural theta = fixtures::section5_estimates();
  const StressPlan plan = cell_plan();
  const PlanResult r = optimize_tau(0.3, theta, plan, 29);
  EXPECT_GT(r.tau_star, 0.0);
  EXPECT_LT(r.tau_star, plan.censor_time);
  EXPECT_GE(r.avar, 0.0);
  EXPECT_NEAR(r.cv * r.cv * r.xi_p * r.xi_p, r.avar, 1e-10 * r.avar);
  ASSERT_EQ(r.grid_tau.size(), 64u);
  for (double a : r.grid_avar) EXPECT_LE(r.avar, a);
  EXPECT_NEAR(r.avar, avar(r.tau_star, 0.3, theta, plan, 29), 1e-9 * r.avar);
  EXPECT_NEAR(r.g1_tau,
              ig_cdf(r.tau_star, theta.mu_x[0], theta.sigma_x2, 1.0), 1e-12);
}

TEST(PlanReport, NineRowsMonotoneAndDeterministic) {
  const ThetaNatural theta = fixtures::section5_estimates();
  const StressPlan plan = cell_plan();
  std::vector<double> grid;
  for (int i = 1; i <= 9; ++i) grid.push_back(0.1 * i);
  const auto rows = plan_report(grid, theta, plan, 29);
  ASSERT_EQ(rows.size(), 9u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_GE(rows[i].tau_star, rows[i - 1].tau_star);
    EXPECT_GT(rows[i].cv, rows[i - 1].cv);
  }
  std::ostringstream a, b;
  write_plan_csv(a, rows);
  write_plan_csv(b, plan_report(grid, theta, plan, 29));
  EXPECT_EQ(a.str(), b.str());
  std::ostringstream tau, cv;
  write_tau_curve_csv(tau, rows);
  write_cv_curve_csv(cv, rows);
  EXPECT_EQ(tau.str().substr(0, tau.str().find('\n')), "p,tau_star");
  EXPECT_EQ(cv.str().substr(0, cv.str().find('\n')), "p,cv");
}

TEST(Avar, AgreesWithMonteCarloInformation) {
  const StressPlan plan = fixtures::example_plan(400);
  const ThetaNatural truth = testing::table1_theta(400);
  const double p = 0.5;
  const double alpha = stress_ratio(plan);
  const double mu0 = use_level_drifts(truth, alpha).mu_x0;
  const double xi = percentile(p, mu0, truth.sigma_x2, plan.threshold);
  const Vec7 h = sensitivity_vector(xi, truth, alpha, plan);
  const Mat7 info = numeric_fisher(truth, plan, 30, 2000, 17).matrix;
  const double f0 = ig_pdf(xi, mu0, truth.sigma_x2, plan.threshold);
  const double mc = h.dot(info.ldlt().solve(h)) / (f0 * f0);
  EXPECT_LT(testing::rel_err(avar(400.0, p, truth, plan, 30), mc), 0.05);
}

}  // namespace
}  // namespace ssalt
