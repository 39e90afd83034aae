#include "ssalt/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ssalt/error.hpp"
#include "ssalt/normal.hpp"
#include "ssalt/quadrature.hpp"

namespace ssalt {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLog2Pi = 1.83787706640934548356065947281;

void require_ig_domain(double t, double sigma2, double threshold) {
  if (!(t > 0.0) || !(sigma2 > 0.0) || !(threshold > 0.0)) {
    throw DomainError("inverse Gaussian: t, sigma^2 and D must be positive");
  }
}

int resolve_piece(double t, const StressPlan& plan, int piece) {
  const int m = static_cast<int>(plan.levels());
  if (piece != 0) {
    if (piece < 1 || piece > m) throw DomainError("piece index out of range");
    return piece;
  }
  if (!(t > 0.0) || !(t <= plan.censor_time)) {
    throw DomainError("time must lie in (0, C]");
  }
  for (int j = 1; j < m; ++j) {
    if (t < plan.change_times[static_cast<std::size_t>(j - 1)]) return j;
  }
  return m;
}

}  // namespace

double arrhenius(double a, double b, double stress) {
  const double v = std::exp(a + b / (kKelvinOffset + stress));
  if (!std::isfinite(v)) throw DomainError("Arrhenius drift overflows");
  return v;
}

ThetaNatural link_to_natural(const ThetaLink& link, const StressPlan& plan) {
  link.validate();
  ThetaNatural theta;
  for (double s : plan.stresses) {
    theta.mu_x.push_back(arrhenius(link.a, link.b, s));
    theta.mu_y.push_back(arrhenius(link.c, link.d, s));
  }
  theta.sigma_x2 = link.sigma_x2;
  theta.sigma_y2 = link.sigma_y2;
  theta.rho = link.rho;
  return theta;
}

double stress_ratio(const StressPlan& plan) {
  if (plan.levels() != 2) {
    throw UnsupportedPlanError("stress ratio is defined for two-level plans");
  }
  const double s0 = plan.use_stress;
  const double s1 = plan.stresses[0];
  const double s2 = plan.stresses[1];
  if (s2 == s0) throw DomainError("stress ratio: S2 equals S0");
  return ((s1 - s0) * (kKelvinOffset + s2)) /
         ((s2 - s0) * (kKelvinOffset + s1));
}

UseLevelDrifts use_level_drifts(const ThetaNatural& theta, double alpha) {
  if (theta.levels() != 2) {
    throw UnsupportedPlanError("use-level drifts need a two-level theta");
  }
  if (alpha == 1.0) throw DomainError("stress ratio of 1 is degenerate");
  auto back = [alpha](double m1, double m2) {
    if (!(m1 > 0.0) || !(m2 > 0.0)) {
      throw DomainError("use-level drifts need positive drifts");
    }
    return std::exp((std::log(m1) - alpha * std::log(m2)) / (1.0 - alpha));
  };
  return {back(theta.mu_x[0], theta.mu_x[1]),
          back(theta.mu_y[0], theta.mu_y[1])};
}

double ig_cdf(double t, double mu, double sigma2, double threshold) {
  require_ig_domain(t, sigma2, threshold);
  const double s = std::sqrt(sigma2 * t);
  const double first = normal::cdf((mu * t - threshold) / s);
  const double log_second = 2.0 * mu * threshold / sigma2 +
                            normal::log_cdf(-(mu * t + threshold) / s);
  const double g = first + std::exp(log_second);
  return std::min(1.0, g);
}

double ig_log_pdf(double t, double mu, double sigma2, double threshold) {
  require_ig_domain(t, sigma2, threshold);
  const double r = threshold - mu * t;
  return std::log(threshold) - 0.5 * (kLog2Pi + std::log(sigma2) + 3.0 * std::log(t)) -
         r * r / (2.0 * sigma2 * t);
}

double ig_pdf(double t, double mu, double sigma2, double threshold) {
  return std::exp(ig_log_pdf(t, mu, sigma2, threshold));
}

double accumulated_drift(const std::vector<double>& mu, const StressPlan& plan,
                         int piece, double t) {
  double acc = 0.0;
  for (int k = 1; k < piece; ++k) {
    acc += mu[static_cast<std::size_t>(k - 1)] *
           (plan.boundary(static_cast<std::size_t>(k)) -
            plan.boundary(static_cast<std::size_t>(k - 1)));
  }
  return acc + mu[static_cast<std::size_t>(piece - 1)] *
                   (t - plan.boundary(static_cast<std::size_t>(piece - 1)));
}

PieceKernels piece_kernels(double t, double y, const ThetaNatural& theta,
                           const StressPlan& plan, int piece) {
  PieceKernels k;
  k.piece = resolve_piece(t, plan, piece);
  k.mean_x = accumulated_drift(theta.mu_x, plan, k.piece, t);
  k.mean_y = accumulated_drift(theta.mu_y, plan, k.piece, t);
  k.q = y - k.mean_y;
  k.p = plan.threshold - k.mean_x;
  return k;
}

double failure_time_density(double t, const ThetaNatural& theta,
                            const StressPlan& plan, int piece) {
  const int j = resolve_piece(t, plan, piece);
  return ig_pdf(t, theta.mu_x[static_cast<std::size_t>(j - 1)], theta.sigma_x2,
                plan.threshold);
}

double piece_probability(int piece, const ThetaNatural& theta,
                         const StressPlan& plan) {
  const auto j = static_cast<std::size_t>(piece);
  const double mu = theta.mu_x[j - 1];
  const double lo = plan.boundary(j - 1);
  const double hi = plan.boundary(j);
  const double g_lo =
      lo > 0.0 ? ig_cdf(lo, mu, theta.sigma_x2, plan.threshold) : 0.0;
  return ig_cdf(hi, mu, theta.sigma_x2, plan.threshold) - g_lo;
}

double survival_probability(const ThetaNatural& theta, const StressPlan& plan) {
  double s = 1.0;
  for (std::size_t j = 1; j <= plan.levels(); ++j) {
    s -= piece_probability(static_cast<int>(j), theta, plan);
  }
  return s;
}

double p1_marker_given_x(double y, double x, const ThetaNatural& theta,
                         const StressPlan& plan) {
  const int m = static_cast<int>(plan.levels());
  const double c = plan.censor_time;
  const double mx = accumulated_drift(theta.mu_x, plan, m, c);
  const double my = accumulated_drift(theta.mu_y, plan, m, c);
  const double mean = my + theta.eta2() * (x - mx);
  const double var = c * theta.sigma_y2 * (1.0 - theta.rho * theta.rho);
  return std::exp(normal::log_density(y, mean, var));
}

double p2_marker_given_t(double y, double t, const ThetaNatural& theta,
                         const StressPlan& plan, int piece) {
  const PieceKernels k = piece_kernels(t, y, theta, plan, piece);
  const double mean = k.mean_y + theta.eta2() * k.p;
  const double var = t * theta.sigma_y2 * (1.0 - theta.rho * theta.rho);
  return std::exp(normal::log_density(y, mean, var));
}

double p3_surviving_x(double x, const ThetaNatural& theta,
                      const StressPlan& plan) {
  const double d = plan.threshold;
  if (!(x < d)) return 0.0;
  const int m = static_cast<int>(plan.levels());
  const double c = plan.censor_time;
  const double mx = accumulated_drift(theta.mu_x, plan, m, c);
  const double reflect = -std::expm1(-2.0 * d * (d - x) / (theta.sigma_x2 * c));
  return reflect * std::exp(normal::log_density(x, mx, theta.sigma_x2 * c));
}

double log_censored_marker_density(double y, const ThetaNatural& theta,
                                   const StressPlan& plan) {
  if (!(std::abs(theta.rho) < 1.0)) {
    throw DomainError("censored marker density needs |rho| < 1");
  }
  const int m = static_cast<int>(plan.levels());
  const double c = plan.censor_time;
  const double d = plan.threshold;
  const double v = theta.sigma_x2;
  const double one_m_rho2 = 1.0 - theta.rho * theta.rho;
  const double p = d - accumulated_drift(theta.mu_x, plan, m, c);
  const double q = y - accumulated_drift(theta.mu_y, plan, m, c);
  const double cy = 1.0 / std::sqrt(theta.sigma_y2 * c);
  const double e3 = theta.eta3(c);
  const double kappa = theta.rho * std::sqrt(v / theta.sigma_y2);
  const double c11 = e3 * (p - kappa * q);
  const double c21 = c11 - 2.0 * d * one_m_rho2 * e3;
  const double c12 = cy * q;
  const double c22 = cy * (q - 2.0 * theta.eta2() * d);
  const double beta = 2.0 * d * (d - p) / (v * c);
  const double l1 = normal::log_cdf(c11) + normal::log_pdf(c12);
  const double l2 = beta + normal::log_cdf(c21) + normal::log_pdf(c22);
  if (!(l2 < l1)) return kNegInf;
  return std::log(cy) + l1 + std::log(-std::expm1(l2 - l1));
}

double censored_marker_density(double y, const ThetaNatural& theta,
                               const StressPlan& plan) {
  return std::exp(log_censored_marker_density(y, theta, plan));
}

double censored_marker_mass(const ThetaNatural& theta, const StressPlan& plan) {
  const int m = static_cast<int>(plan.levels());
  const double c = plan.censor_time;
  const double my = accumulated_drift(theta.mu_y, plan, m, c);
  const double sd = std::sqrt(theta.sigma_y2 * c);
  quad::Options opt;
  opt.abs_tol = 1e-13;
  opt.rel_tol = 1e-11;
  return quad::integral(
      [&](double y) { return censored_marker_density(y, theta, plan); },
      my - 12.0 * sd, my + 12.0 * sd, opt);
}

double log_failing_joint_density(double y, double t, const ThetaNatural& theta,
                                 const StressPlan& plan, int piece) {
  const PieceKernels k = piece_kernels(t, y, theta, plan, piece);
  const double d = plan.threshold;
  const double v = theta.sigma_x2;
  const double one_m_rho2 = 1.0 - theta.rho * theta.rho;
  const double mu = theta.mu_x[static_cast<std::size_t>(k.piece - 1)];
  const double u = k.q - theta.eta2() * k.p;
  const double b = d - mu * t;
  const double q_form = theta.eta1() * u * u + b * b / (2.0 * v);
  return std::log(d) - kLog2Pi -
         0.5 * std::log(v * theta.sigma_y2 * one_m_rho2) - 2.0 * std::log(t) -
         q_form / t;
}

double failing_joint_density(double y, double t, const ThetaNatural& theta,
                             const StressPlan& plan, int piece) {
  return std::exp(log_failing_joint_density(y, t, theta, plan, piece));
}

FailingDensityForms failing_joint_density_forms(double y, double t,
                                                const ThetaNatural& theta,
                                                const StressPlan& plan,
                                                int piece) {
  FailingDensityForms forms;
  forms.product = p2_marker_given_t(y, t, theta, plan, piece) *
                  failure_time_density(t, theta, plan, piece);
  forms.exponential = failing_joint_density(y, t, theta, plan, piece);
  return forms;
}

}  // namespace ssalt
