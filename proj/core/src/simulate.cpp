#include "ssalt/simulate.hpp"

#include <cmath>

#include "ssalt/error.hpp"
#include "ssalt/model.hpp"
#include "ssalt/parallel.hpp"

namespace ssalt {

namespace {

constexpr long kRejectionCap = 1000000;

/// t in (lo, hi) with G(t) = target, by bisection to 1e-12.
double invert_cdf(double target, double lo, double hi, double mu,
                  const ThetaNatural& theta, const StressPlan& plan) {
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (ig_cdf(mid, mu, theta.sigma_x2, plan.threshold) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

Observation sample_observation(const ThetaNatural& theta,
                               const StressPlan& plan, RandomStream& rng) {
  const std::size_t m = plan.levels();
  const double d = plan.threshold;
  const double one_m_rho2 = 1.0 - theta.rho * theta.rho;
  const double u = rng.uniform();
  double cumulative = 0.0;
  for (std::size_t j = 1; j <= m; ++j) {
    const double pj = piece_probability(static_cast<int>(j), theta, plan);
    if (u >= cumulative + pj) {
      cumulative += pj;
      continue;
    }
    const double mu = theta.mu_x[j - 1];
    const double lo = plan.boundary(j - 1);
    const double hi = plan.boundary(j);
    const double g_lo = lo > 0.0 ? ig_cdf(lo, mu, theta.sigma_x2, d) : 0.0;
    const double g_hi = ig_cdf(hi, mu, theta.sigma_x2, d);
    const double t =
        invert_cdf(g_lo + rng.uniform() * (g_hi - g_lo), lo, hi, mu, theta, plan);
    const int piece = static_cast<int>(j);
    const double mean_x = accumulated_drift(theta.mu_x, plan, piece, t);
    const double mean_y = accumulated_drift(theta.mu_y, plan, piece, t);
    const double y_mean = mean_y + theta.eta2() * (d - mean_x);
    const double y_sd = std::sqrt(t * theta.sigma_y2 * one_m_rho2);
    return FailedObs{piece, t, y_mean + y_sd * rng.normal()};
  }

  const double c = plan.censor_time;
  const int last = static_cast<int>(m);
  const double mean_x = accumulated_drift(theta.mu_x, plan, last, c);
  const double mean_y = accumulated_drift(theta.mu_y, plan, last, c);
  const double x_sd = std::sqrt(theta.sigma_x2 * c);
  for (long k = 0; k < kRejectionCap; ++k) {
    const double x = mean_x + x_sd * rng.normal();
    if (!(x < d)) continue;
    const double accept = -std::expm1(-2.0 * d * (d - x) / (theta.sigma_x2 * c));
    if (rng.uniform() >= accept) continue;
    const double y_mean = mean_y + theta.eta2() * (x - mean_x);
    const double y_sd = std::sqrt(c * theta.sigma_y2 * one_m_rho2);
    return CensoredObs{y_mean + y_sd * rng.normal()};
  }
  throw InternalError("censored marker rejection sampler hit its retry cap");
}

Dataset simulate_dataset(std::size_t n, const ThetaNatural& theta,
                         const StressPlan& plan, std::uint64_t seed,
                         std::uint64_t replicate) {
  plan.validate();
  theta.validate();
  Dataset data;
  data.plan = plan;
  data.observations.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    RandomStream rng = RandomStream::derive(seed, {replicate, i});
    data.observations.push_back(sample_observation(theta, plan, rng));
  }
  return data;
}

Observation path_oracle_sample(const ThetaNatural& theta,
                               const StressPlan& plan, double dt,
                               RandomStream& rng) {
  if (!(dt > 0.0)) throw DomainError("path oracle step must be positive");
  const double d = plan.threshold;
  const double sx = theta.sigma_x();
  const double sy = theta.sigma_y();
  const double cross = std::sqrt(1.0 - theta.rho * theta.rho);
  double r = 0.0, x = 0.0, y = 0.0;
  for (std::size_t j = 1; j <= plan.levels(); ++j) {
    const double end = plan.boundary(j);
    const double mx = theta.mu_x[j - 1];
    const double my = theta.mu_y[j - 1];
    while (r < end) {
      const double h = std::min(dt, end - r);
      const double sh = std::sqrt(h);
      const double z1 = rng.normal();
      const double z2 = rng.normal();
      const double x_next = x + mx * h + sx * sh * z1;
      const double y_next =
          y + my * h + sy * sh * (theta.rho * z1 + cross * z2);
      if (x_next >= d) {
        const double w = (d - x) / (x_next - x);
        const double t = r + w * h;
        return FailedObs{piece_of(t, plan), t, y + w * (y_next - y)};
      }
      r += h;
      x = x_next;
      y = y_next;
    }
  }
  return CensoredObs{y};
}

std::vector<std::string> natural_parameter_names(std::size_t m) {
  std::vector<std::string> names;
  for (std::size_t j = 1; j <= m; ++j) names.push_back("mu_X" + std::to_string(j));
  for (std::size_t j = 1; j <= m; ++j) names.push_back("mu_Y" + std::to_string(j));
  names.insert(names.end(), {"sigma_X2", "sigma_Y2", "rho"});
  return names;
}

McStudyReport mc_study(std::size_t replicates, std::size_t n,
                       const ThetaNatural& truth, const StressPlan& plan,
                       std::uint64_t seed, const McStudyOptions& options) {
  truth.validate();
  plan.validate();
  McStudyReport report;
  report.replicates = replicates;
  report.sample_size = n;
  report.seed = seed;
  report.estimates.assign(replicates, {});
  std::vector<char> converged(replicates, 0);

  parallel_for(replicates, options.threads, [&](std::size_t r) {
    const Dataset data = simulate_dataset(n, truth, plan, seed, r);
    FitOptions fit_options = options.fit;
    fit_options.seed = mix64(seed ^ mix64(r + 0xF17));
    fit_options.threads = 1;
    const FitResult fit = options.start_at_truth
                              ? fit_mle(data, truth, fit_options)
                              : fit_mle(data, fit_options);
    report.estimates[r] = fit.theta_hat.to_vector();
    converged[r] = fit.converged ? 1 : 0;
  });

  const std::vector<double> t = truth.to_vector();
  const std::vector<std::string> names = natural_parameter_names(truth.levels());
  for (std::size_t k = 0; k < t.size(); ++k) {
    double sum = 0.0, sq = 0.0;
    for (const auto& est : report.estimates) {
      sum += est[k];
      sq += (est[k] - t[k]) * (est[k] - t[k]);
    }
    const double count = static_cast<double>(replicates);
    McRow row;
    row.name = names[k];
    row.truth = t[k];
    row.mean = replicates > 0 ? sum / count : 0.0;
    row.rbias = (row.mean - t[k]) / t[k];
    row.rrmse = replicates > 0 ? std::sqrt(sq / count) / std::abs(t[k]) : 0.0;
    report.rows.push_back(row);
  }
  for (char c : converged) report.nonconverged += c ? 0 : 1;
  return report;
}

}  // namespace ssalt
