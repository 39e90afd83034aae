#include "ssalt/planner.hpp"

#include <Eigen/Cholesky>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

#include "ssalt/error.hpp"
#include "ssalt/model.hpp"
#include "ssalt/normal.hpp"
#include "ssalt/parallel.hpp"

namespace ssalt {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
const double kInvPhi = 0.5 * (std::sqrt(5.0) - 1.0);
}  // namespace

double percentile(double p, double mu_x0, double sigma_x2, double threshold) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("percentile needs 0 < p < 1");
  if (!(mu_x0 > 0.0)) throw DomainError("percentile needs a positive drift");
  auto f = [&](double t) { return ig_cdf(t, mu_x0, sigma_x2, threshold) - p; };
  double lo = threshold / mu_x0;
  double hi = lo;
  while (f(lo) > 0.0) lo *= 0.5;
  while (f(hi) < 0.0) hi *= 2.0;
  if (lo == hi) return lo;
  std::uintmax_t max_iter = 200;
  const auto bracket = boost::math::tools::toms748_solve(
      f, lo, hi, boost::math::tools::eps_tolerance<double>(52), max_iter);
  double xi = 0.5 * (bracket.first + bracket.second);
  if (std::abs(f(bracket.first)) < std::abs(f(xi))) xi = bracket.first;
  if (std::abs(f(bracket.second)) < std::abs(f(xi))) xi = bracket.second;
  return xi;
}

Vec7 sensitivity_vector(double xi_p, const ThetaNatural& theta_hat,
                        double alpha, const StressPlan& plan) {
  const double d = plan.threshold;
  const double mu1 = theta_hat.mu_x[0];
  const double mu2 = theta_hat.mu_x[1];
  const double v = theta_hat.sigma_x2;
  const double sx = std::sqrt(v);
  const double mu0 = use_level_drifts(theta_hat, alpha).mu_x0;
  const double root = std::sqrt(v * xi_p);
  const double c1x = (mu0 * xi_p - d) / root;
  const double c2x = -(mu0 * xi_p + d) / root;
  const double beta3 = 2.0 * d * mu0 / v;
  // e^beta3 Phi(c2x) and e^beta3 phi(c2x) without overflow.
  const double e_cdf = std::exp(beta3 + normal::log_cdf(c2x));
  const double e_pdf = std::exp(beta3 + normal::log_pdf(c2x));
  Vec7 h = Vec7::Zero();
  h[param::kMuX1] =
      xi_p * mu0 * normal::pdf(c1x) / (mu1 * (1.0 - alpha) * root) +
      2.0 * d * mu0 * e_cdf / (mu1 * v * (1.0 - alpha)) -
      xi_p * mu0 * e_pdf / (mu1 * (1.0 - alpha) * root);
  h[param::kMuX2] = -alpha * (mu1 / mu2) * h[param::kMuX1];
  h[param::kSigmaX2] =
      -(mu0 * xi_p - d) * normal::pdf(c1x) / (2.0 * v * sx * std::sqrt(xi_p)) -
      2.0 * d * mu0 * e_cdf / (v * v) +
      (mu0 * xi_p + d) * e_pdf / (2.0 * v * sx * std::sqrt(xi_p));
  return h;
}

double avar(double tau, double p, const ThetaNatural& theta_hat,
            const StressPlan& plan, int n, const PlannerOptions& options) {
  if (plan.levels() != 2) {
    throw UnsupportedPlanError("planning is implemented for two-level plans");
  }
  if (!(tau > 0.0 && tau < plan.censor_time)) {
    throw DomainError("tau must lie in (0, C)");
  }
  StressPlan candidate = plan;
  candidate.change_times = {tau};
  const double alpha = stress_ratio(candidate);
  const double mu0 = use_level_drifts(theta_hat, alpha).mu_x0;
  const double xi = percentile(p, mu0, theta_hat.sigma_x2, plan.threshold);
  const Vec7 h = sensitivity_vector(xi, theta_hat, alpha, candidate);
  const Mat7 info =
      fisher_matrix(theta_hat, candidate, n, options.assembly).matrix;
  if (!info.allFinite()) return kInf;
  const Vec7 diag = info.diagonal();
  if ((diag.array() <= 0.0).any()) return kInf;
  const Vec7 scale = diag.cwiseSqrt().cwiseInverse();
  const Mat7 scaled = scale.asDiagonal() * info * scale.asDiagonal();
  Eigen::LLT<Mat7> llt(scaled);
  if (llt.info() != Eigen::Success) return kInf;
  const Vec7 hs = scale.asDiagonal() * h;
  const double quad = hs.dot(llt.solve(hs));
  if (!(quad >= 0.0) || !std::isfinite(quad)) return kInf;
  const double f0 = ig_pdf(xi, mu0, theta_hat.sigma_x2, plan.threshold);
  return quad / (f0 * f0);
}

PlanResult optimize_tau(double p, const ThetaNatural& theta_hat,
                        const StressPlan& plan, int n,
                        const PlannerOptions& options) {
  const double lo = options.epsilon;
  const double hi = plan.censor_time - options.epsilon;
  if (!(lo < hi) || options.grid_points < 3) {
    throw DomainError("planner search interval or grid is degenerate");
  }
  PlanResult out;
  out.p = p;
  const auto points = static_cast<std::size_t>(options.grid_points);
  out.grid_tau.resize(points);
  out.grid_avar.resize(points);
  for (std::size_t i = 0; i < points; ++i) {
    out.grid_tau[i] =
        lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  parallel_for(points, options.threads, [&](std::size_t i) {
    try {
      out.grid_avar[i] = avar(out.grid_tau[i], p, theta_hat, plan, n, options);
    } catch (const DomainError&) {
      out.grid_avar[i] = kInf;
    }
  });
  std::size_t best = 0;
  for (std::size_t i = 1; i < points; ++i) {
    if (out.grid_avar[i] < out.grid_avar[best]) best = i;
  }
  if (!std::isfinite(out.grid_avar[best])) {
    throw DomainError("every candidate tau gives a singular information matrix");
  }
  auto objective = [&](double tau) {
    try {
      return avar(tau, p, theta_hat, plan, n, options);
    } catch (const DomainError&) {
      return kInf;
    }
  };
  double a = out.grid_tau[best == 0 ? 0 : best - 1];
  double b = out.grid_tau[std::min(best + 1, points - 1)];
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = objective(x1);
  double f2 = objective(x2);
  while (b - a > options.tau_tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = objective(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = objective(x2);
    }
  }
  double tau = 0.5 * (a + b);
  double value = objective(tau);
  if (!(value <= out.grid_avar[best])) {
    tau = out.grid_tau[best];
    value = out.grid_avar[best];
  }
  StressPlan chosen = plan;
  chosen.change_times = {tau};
  const double alpha = stress_ratio(chosen);
  const double mu0 = use_level_drifts(theta_hat, alpha).mu_x0;
  out.xi_p = percentile(p, mu0, theta_hat.sigma_x2, plan.threshold);
  out.tau_star = tau;
  out.avar = value;
  out.cv = std::sqrt(value) / out.xi_p;
  out.g1_tau = ig_cdf(tau, theta_hat.mu_x[0], theta_hat.sigma_x2, plan.threshold);
  out.g2_rem = piece_probability(2, theta_hat, chosen);
  return out;
}

std::vector<PlanResult> plan_report(const std::vector<double>& p_grid,
                                    const ThetaNatural& theta_hat,
                                    const StressPlan& plan, int n,
                                    const PlannerOptions& options) {
  std::vector<PlanResult> rows;
  rows.reserve(p_grid.size());
  for (double p : p_grid) rows.push_back(optimize_tau(p, theta_hat, plan, n, options));
  return rows;
}

void write_plan_csv(std::ostream& os, const std::vector<PlanResult>& rows) {
  os << "p,xi_p,tau_star,avar,cv,g1_tau,g2_rem\n" << std::setprecision(10);
  for (const auto& r : rows) {
    os << r.p << ',' << r.xi_p << ',' << r.tau_star << ',' << r.avar << ','
       << r.cv << ',' << r.g1_tau << ',' << r.g2_rem << '\n';
  }
}

void write_tau_curve_csv(std::ostream& os, const std::vector<PlanResult>& rows) {
  os << "p,tau_star\n" << std::setprecision(10);
  for (const auto& r : rows) os << r.p << ',' << r.tau_star << '\n';
}

void write_cv_curve_csv(std::ostream& os, const std::vector<PlanResult>& rows) {
  os << "p,cv\n" << std::setprecision(10);
  for (const auto& r : rows) os << r.p << ',' << r.cv << '\n';
}

}  // namespace ssalt
