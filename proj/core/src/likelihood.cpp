#include "ssalt/likelihood.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "ssalt/error.hpp"
#include "ssalt/model.hpp"
#include "ssalt/parallel.hpp"
#include "ssalt/rng.hpp"

namespace ssalt {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kInf = std::numeric_limits<double>::infinity();
// log(1e-300): item densities at or below this make the sample degenerate.
const double kLogFloor = std::log(1e-300);

std::size_t param_count(std::size_t m) { return 2 * m + 3; }

/// Optimizer coordinates and their map back to theta.
struct Coordinates {
  DriftSpace space;
  StressPlan plan;

  Eigen::VectorXd encode(const ThetaNatural& theta) const {
    if (space == DriftSpace::kNatural) return to_unconstrained(theta);
    Eigen::VectorXd z(7);
    z << std::log(theta.mu_x.front()), std::log(theta.mu_x.back()),
        std::log(theta.mu_y.front()), std::log(theta.mu_y.back()),
        std::log(theta.sigma_x2), std::log(theta.sigma_y2),
        std::atanh(theta.rho);
    return z;
  }

  ThetaLink link(const Eigen::VectorXd& z) const {
    return link_from_log_drifts(z[0], z[1], z[2], z[3], std::exp(z[4]),
                                std::exp(z[5]), std::tanh(z[6]), plan);
  }

  ThetaNatural decode(const Eigen::VectorXd& z) const {
    if (space == DriftSpace::kNatural) {
      return from_unconstrained(z, DriftSpace::kNatural, plan);
    }
    return link_to_natural(link(z), plan);
  }
};

double negative_loglik(const Dataset& data, const Coordinates& coords,
                       const Eigen::VectorXd& z) {
  if (!z.allFinite()) return kInf;
  try {
    const ThetaNatural theta = coords.decode(z);
    if (!(std::abs(theta.rho) < 1.0) || !(theta.sigma_x2 > 0.0) ||
        !(theta.sigma_y2 > 0.0)) {
      return kInf;
    }
    const double ll = log_likelihood(data, theta);
    return std::isfinite(ll) ? -ll : kInf;
  } catch (const DomainError&) {
    return kInf;
  }
}

struct StartOutcome {
  opt::Result result;
  int iterations = 0;
  bool converged = false;
};

}  // namespace

double observation_log_density(const Observation& obs,
                               const ThetaNatural& theta,
                               const StressPlan& plan) {
  if (const auto* f = std::get_if<FailedObs>(&obs)) {
    return log_failing_joint_density(f->marker, f->time, theta, plan, f->piece);
  }
  return log_censored_marker_density(std::get<CensoredObs>(obs).marker, theta,
                                     plan);
}

double log_likelihood(const Dataset& data, const ThetaNatural& theta) {
  std::vector<double> terms(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double l = observation_log_density(data.observations[i], theta,
                                             data.plan);
    if (!(l > kLogFloor)) return kNegInf;
    terms[i] = l;
  }
  return pairwise_sum(terms.data(), terms.size());
}

Eigen::VectorXd to_unconstrained(const ThetaNatural& theta) {
  theta.validate();
  const std::size_t m = theta.levels();
  Eigen::VectorXd z(static_cast<Eigen::Index>(param_count(m)));
  for (std::size_t j = 0; j < m; ++j) {
    z[static_cast<Eigen::Index>(j)] = std::log(theta.mu_x[j]);
    if (!(theta.mu_y[j] > 0.0)) {
      throw DomainError("natural drift space needs positive marker drifts");
    }
    z[static_cast<Eigen::Index>(m + j)] = std::log(theta.mu_y[j]);
  }
  z[static_cast<Eigen::Index>(2 * m)] = std::log(theta.sigma_x2);
  z[static_cast<Eigen::Index>(2 * m + 1)] = std::log(theta.sigma_y2);
  z[static_cast<Eigen::Index>(2 * m + 2)] = std::atanh(theta.rho);
  return z;
}

Eigen::VectorXd to_unconstrained(const ThetaLink& link) {
  link.validate();
  Eigen::VectorXd z(7);
  z << link.a, link.b, link.c, link.d, std::log(link.sigma_x2),
      std::log(link.sigma_y2), std::atanh(link.rho);
  return z;
}

ThetaLink link_from_unconstrained(const Eigen::VectorXd& z) {
  if (z.size() != 7) throw DomainError("link vector must have 7 entries");
  return {z[0], z[1], z[2], z[3], std::exp(z[4]), std::exp(z[5]),
          std::tanh(z[6])};
}

ThetaNatural from_unconstrained(const Eigen::VectorXd& z, DriftSpace space,
                                const StressPlan& plan) {
  if (space == DriftSpace::kLink) {
    return link_to_natural(link_from_unconstrained(z), plan);
  }
  if (z.size() < 5 || (z.size() - 3) % 2 != 0) {
    throw DomainError("unconstrained vector must have length 2m + 3");
  }
  const auto m = static_cast<std::size_t>((z.size() - 3) / 2);
  ThetaNatural theta;
  for (std::size_t j = 0; j < m; ++j) {
    theta.mu_x.push_back(std::exp(z[static_cast<Eigen::Index>(j)]));
    theta.mu_y.push_back(std::exp(z[static_cast<Eigen::Index>(m + j)]));
  }
  theta.sigma_x2 = std::exp(z[static_cast<Eigen::Index>(2 * m)]);
  theta.sigma_y2 = std::exp(z[static_cast<Eigen::Index>(2 * m + 1)]);
  theta.rho = std::tanh(z[static_cast<Eigen::Index>(2 * m + 2)]);
  return theta;
}

ThetaLink link_from_log_drifts(double lx1, double lxm, double ly1, double lym,
                               double sigma_x2, double sigma_y2, double rho,
                               const StressPlan& plan) {
  if (plan.levels() < 2) {
    throw DomainError("link parameters need at least two stress levels");
  }
  const double k1 = 1.0 / (kKelvinOffset + plan.stresses.front());
  const double km = 1.0 / (kKelvinOffset + plan.stresses.back());
  ThetaLink link;
  link.b = (lxm - lx1) / (km - k1);
  link.a = lx1 - link.b * k1;
  link.d = (lym - ly1) / (km - k1);
  link.c = ly1 - link.d * k1;
  link.sigma_x2 = sigma_x2;
  link.sigma_y2 = sigma_y2;
  link.rho = rho;
  return link;
}

ThetaNatural heuristic_start(const Dataset& data) {
  const StressPlan& plan = data.plan;
  const std::size_t m = plan.levels();
  const double d = plan.threshold;
  ThetaNatural theta;
  theta.mu_x.assign(m, d / plan.censor_time);
  theta.mu_y.assign(m, 0.0);

  std::vector<double> sum_t(m, 0.0), sum_y(m, 0.0), count(m, 0.0);
  std::vector<double> all_sum_t(m, 0.0), all_sum_y(m, 0.0);
  for (const auto& obs : data.observations) {
    const double t = observed_time(obs, plan);
    const double y = observed_marker(obs);
    const int j = std::holds_alternative<FailedObs>(obs)
                      ? std::get<FailedObs>(obs).piece
                      : static_cast<int>(m);
    const auto k = static_cast<std::size_t>(j - 1);
    all_sum_t[k] += t;
    all_sum_y[k] += y;
    if (std::holds_alternative<FailedObs>(obs)) {
      sum_t[k] += t;
      count[k] += 1.0;
    }
  }
  double total_t = 0.0, total_y = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    total_t += all_sum_t[k];
    total_y += all_sum_y[k];
  }
  const double pooled_y = total_t > 0.0 ? std::abs(total_y) / total_t : 1e-3;
  for (std::size_t k = 0; k < m; ++k) {
    if (count[k] > 0.0) theta.mu_x[k] = d / (sum_t[k] / count[k]);
    theta.mu_y[k] = all_sum_t[k] > 0.0 && all_sum_y[k] > 0.0
                        ? all_sum_y[k] / all_sum_t[k]
                        : std::max(pooled_y, 1e-8);
  }
  for (std::size_t k = 1; k < m; ++k) {
    // Keep drifts increasing with stress so a link fit starts sensibly.
    theta.mu_x[k] = std::max(theta.mu_x[k], theta.mu_x[k - 1] * 1.05);
    theta.mu_y[k] = std::max(theta.mu_y[k], theta.mu_y[k - 1] * 1.05);
  }

  // Scaled residuals of the failure time and marker around their drifts.
  double sxx = 0.0, syy = 0.0, sxy = 0.0, mx = 0.0, my = 0.0, n = 0.0;
  std::vector<double> rx, ry;
  for (const auto& obs : data.observations) {
    const auto* f = std::get_if<FailedObs>(&obs);
    if (f == nullptr) continue;
    const auto k = static_cast<std::size_t>(f->piece - 1);
    const double s = std::sqrt(f->time);
    rx.push_back((d - theta.mu_x[k] * f->time) / s);
    ry.push_back((f->marker - accumulated_drift(theta.mu_y, plan, f->piece,
                                                f->time)) / s);
  }
  n = static_cast<double>(rx.size());
  if (n >= 3.0) {
    for (std::size_t i = 0; i < rx.size(); ++i) {
      mx += rx[i];
      my += ry[i];
    }
    mx /= n;
    my /= n;
    for (std::size_t i = 0; i < rx.size(); ++i) {
      sxx += rx[i] * rx[i];
      syy += (ry[i] - my) * (ry[i] - my);
      sxy += (rx[i] - mx) * (ry[i] - my);
    }
    theta.sigma_x2 = std::max(sxx / n, 1e-8);
    theta.sigma_y2 = std::max(syy / (n - 1.0), 1e-8);
    const double denom = std::sqrt((sxx - n * mx * mx) * syy);
    const double r = denom > 0.0 ? sxy / denom : 0.0;
    theta.rho = std::clamp(std::abs(r), 0.05, 0.9);
  } else {
    theta.sigma_x2 = d * d / plan.censor_time;
    theta.sigma_y2 = std::max(pooled_y * pooled_y * plan.censor_time, 1e-8);
    theta.rho = 0.3;
  }
  return theta;
}

FitResult fit_mle(const Dataset& data, const ThetaNatural& init,
                  const FitOptions& options) {
  data.validate();
  init.validate();
  if (init.levels() != data.plan.levels()) {
    throw DomainError("initial theta has the wrong number of levels");
  }
  if (options.space == DriftSpace::kLink && data.plan.levels() < 2) {
    throw DomainError("link-space fits need at least two stress levels");
  }
  const Coordinates coords{options.space, data.plan};
  const opt::Objective objective = [&](const Eigen::VectorXd& z) {
    return negative_loglik(data, coords, z);
  };
  const Eigen::VectorXd z0 = coords.encode(init);
  const int starts = std::max(1, options.starts);

  std::vector<StartOutcome> outcomes(static_cast<std::size_t>(starts));
  parallel_for(outcomes.size(), options.threads, [&](std::size_t s) {
    Eigen::VectorXd z = z0;
    if (s > 0) {
      RandomStream rng = RandomStream::derive(options.seed, {s});
      for (Eigen::Index i = 0; i < z.size(); ++i) {
        z[i] += options.jitter * rng.normal();
      }
      if (!std::isfinite(objective(z))) z = z0;
    }
    const Eigen::VectorXd steps = Eigen::VectorXd::Constant(z.size(), 0.1);
    opt::Result simplex = opt::nelder_mead(objective, z, steps, options.simplex);
    StartOutcome out;
    out.iterations = simplex.iterations;
    out.converged = simplex.converged;
    if (std::isfinite(simplex.f)) {
      opt::Result polish = opt::bfgs(objective, simplex.x, options.polish);
      out.iterations += polish.iterations;
      if (polish.f <= simplex.f) {
        out.converged = polish.converged || simplex.converged;
        simplex = polish;
      }
    }
    out.result = simplex;
    outcomes[s] = out;
  });

  std::size_t best = 0;
  for (std::size_t s = 1; s < outcomes.size(); ++s) {
    if (outcomes[s].result.f < outcomes[best].result.f) best = s;
  }
  const StartOutcome& winner = outcomes[best];
  FitResult fit;
  fit.best_start = static_cast<int>(best);
  fit.iterations = winner.iterations;
  fit.loglik = -winner.result.f;
  if (!std::isfinite(winner.result.f)) {
    fit.theta_hat = init;
    fit.loglik = log_likelihood(data, init);
    fit.converged = false;
    return fit;
  }
  fit.theta_hat = coords.decode(winner.result.x);
  if (options.space == DriftSpace::kLink) {
    fit.theta_link_hat = coords.link(winner.result.x);
  }
  const Eigen::VectorXd g = opt::fd_gradient(
      objective, winner.result.x, opt::fd_steps(winner.result.x, 1e-5, 1.0));
  fit.gradient_norm = g.lpNorm<Eigen::Infinity>();
  fit.converged = winner.converged && std::isfinite(fit.loglik);

  if (options.standard_errors) {
    const std::vector<double> v = fit.theta_hat.to_vector();
    const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(
        v.data(), static_cast<Eigen::Index>(v.size()));
    const opt::Objective natural = [&](const Eigen::VectorXd& p) {
      try {
        const ThetaNatural th = ThetaNatural::from_vector(
            std::vector<double>(p.data(), p.data() + p.size()));
        const double ll = log_likelihood(data, th);
        return std::isfinite(ll) ? -ll : kInf;
      } catch (const DomainError&) {
        return kInf;
      }
    };
    const Eigen::MatrixXd info =
        opt::fd_hessian(natural, x, opt::fd_steps(x, 1e-4, 1e-8));
    std::vector<double> se(v.size(), std::numeric_limits<double>::quiet_NaN());
    if (info.allFinite()) {
      Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
      if (ldlt.info() == Eigen::Success) {
        const Eigen::MatrixXd cov =
            ldlt.solve(Eigen::MatrixXd::Identity(info.rows(), info.cols()));
        for (std::size_t i = 0; i < se.size(); ++i) {
          const double c = cov(static_cast<Eigen::Index>(i),
                               static_cast<Eigen::Index>(i));
          if (c > 0.0) se[i] = std::sqrt(c);
        }
      }
    }
    fit.standard_errors = se;
  }
  return fit;
}

FitResult fit_mle(const Dataset& data, const ThetaLink& init,
                  const FitOptions& options) {
  return fit_mle(data, link_to_natural(init, data.plan), options);
}

FitResult fit_mle(const Dataset& data, const FitOptions& options) {
  return fit_mle(data, heuristic_start(data), options);
}

}  // namespace ssalt
