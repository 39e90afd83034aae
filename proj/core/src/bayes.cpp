#include "ssalt/bayes.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

#include "ssalt/error.hpp"
#include "ssalt/likelihood.hpp"
#include "ssalt/model.hpp"
#include "ssalt/normal.hpp"
#include "ssalt/rng.hpp"

namespace ssalt {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

ThetaLink from_sampler(const Eigen::VectorXd& z) {
  return {z[0], z[1], z[2], z[3], std::exp(z[4]), std::exp(z[5]), z[6]};
}
}  // namespace

void PriorConfig::validate() const {
  if (!(normal_variance > 0.0) || !std::isfinite(normal_variance)) {
    throw DomainError("prior normal variance must be positive");
  }
}

double log_prior(const ThetaLink& theta_star, const PriorConfig& config) {
  if (!(theta_star.sigma_x2 > 0.0) || !(theta_star.sigma_y2 > 0.0) ||
      !(std::abs(theta_star.rho) < 1.0)) {
    return kNegInf;
  }
  double lp = 0.0;
  for (double v : {theta_star.a, theta_star.b, theta_star.c, theta_star.d}) {
    lp += normal::log_density(v, 0.0, config.normal_variance);
  }
  if (config.jeffreys_sigma_x2) lp -= std::log(theta_star.sigma_x2);
  if (config.jeffreys_sigma_y2) lp -= std::log(theta_star.sigma_y2);
  return lp;
}

void MhConfig::validate() const {
  if (total <= 0 || burn_in < 0 || burn_in >= total) {
    throw DomainError("MH needs 0 <= burn-in < total iterations");
  }
  for (double s : scales) {
    if (!(s >= 0.0) || !std::isfinite(s)) {
      throw DomainError("proposal scales must be finite and non-negative");
    }
  }
  if (!(target_acceptance > 0.0 && target_acceptance < 1.0)) {
    throw DomainError("target acceptance must lie in (0, 1)");
  }
}

double GenericChain::acceptance_rate() const {
  long acc = 0;
  for (long a : accepted) acc += a;
  const double moves =
      static_cast<double>(kept()) * static_cast<double>(accepted.size());
  return moves > 0.0 ? static_cast<double>(acc) / moves : 0.0;
}

double Chain::acceptance_rate() const {
  const double moves = static_cast<double>(kept()) * 7.0;
  return moves > 0.0 ? static_cast<double>(accepted) / moves : 0.0;
}

GenericChain rw_mh_generic(
    const std::function<double(const Eigen::VectorXd&)>& log_target,
    const Eigen::VectorXd& init, const std::vector<double>& scales,
    const MhConfig& config, std::uint64_t seed) {
  config.validate();
  const Eigen::Index dim = init.size();
  if (static_cast<Eigen::Index>(scales.size()) != dim) {
    throw DomainError("one proposal scale per coordinate is required");
  }
  Eigen::VectorXd current = init;
  double current_lp = log_target(current);
  if (!std::isfinite(current_lp)) {
    throw DomainError("initial point has zero posterior density");
  }
  GenericChain chain;
  chain.burn_in = config.burn_in;
  chain.total = config.total;
  chain.draws.resize(config.total - config.burn_in, dim);
  chain.accepted.assign(static_cast<std::size_t>(dim), 0);
  std::vector<double> scale = scales;
  RandomStream rng = RandomStream::derive(seed, {0x3C3C});

  for (int it = 0; it < config.total; ++it) {
    const bool burning = it < config.burn_in;
    const double gain = 1.0 / std::pow(static_cast<double>(it) + 1.0, 0.6);
    for (Eigen::Index k = 0; k < dim; ++k) {
      const double old = current[k];
      const double z = rng.normal();
      const double log_u = std::log(rng.uniform());
      current[k] = old + scale[static_cast<std::size_t>(k)] * z;
      const double proposal_lp = log_target(current);
      const bool accept = log_u < proposal_lp - current_lp;
      if (accept) {
        current_lp = proposal_lp;
        if (!burning) ++chain.accepted[static_cast<std::size_t>(k)];
      } else {
        current[k] = old;
      }
      if (burning && config.adapt) {
        scale[static_cast<std::size_t>(k)] *=
            std::exp(gain * ((accept ? 1.0 : 0.0) - config.target_acceptance));
      }
    }
    if (!burning) chain.draws.row(it - config.burn_in) = current.transpose();
  }
  chain.final_scales = scale;
  return chain;
}

Chain rw_mh(const Dataset& data, const ThetaLink& init,
            const PriorConfig& prior, const MhConfig& config,
            std::uint64_t seed) {
  prior.validate();
  data.validate();
  init.validate();
  Eigen::VectorXd z(7);
  z << init.a, init.b, init.c, init.d, std::log(init.sigma_x2),
      std::log(init.sigma_y2), init.rho;
  std::vector<double> scales = config.scales;
  if (scales.empty()) {
    for (Eigen::Index i = 0; i < 7; ++i) {
      scales.push_back(std::max(0.01 * std::abs(z[i]), 1e-4));
    }
  } else if (scales.size() != 7) {
    throw DomainError("rw_mh needs 7 proposal scales");
  }
  const auto log_target = [&](const Eigen::VectorXd& v) {
    if (!(std::abs(v[6]) < 1.0)) return kNegInf;
    const ThetaLink link = from_sampler(v);
    const double lp = log_prior(link, prior);
    if (!std::isfinite(lp)) return kNegInf;
    try {
      const double ll = log_likelihood(data, link_to_natural(link, data.plan));
      // d sigma^2 = sigma^2 d log sigma^2 for both variance rates.
      return std::isfinite(ll) ? lp + ll + v[4] + v[5] : kNegInf;
    } catch (const DomainError&) {
      return kNegInf;
    }
  };
  const GenericChain g = rw_mh_generic(log_target, z, scales, config, seed);
  Chain chain;
  chain.draws = g.draws;
  chain.draws.col(4) = chain.draws.col(4).array().exp();
  chain.draws.col(5) = chain.draws.col(5).array().exp();
  for (long a : g.accepted) chain.accepted += a;
  chain.burn_in = g.burn_in;
  chain.total = g.total;
  chain.final_scales = g.final_scales;
  return chain;
}

double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw DomainError("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

PosteriorSummary summarize_chain(const Chain& chain) {
  PosteriorSummary out;
  out.kept = chain.kept();
  out.acceptance_rate = chain.acceptance_rate();
  const Eigen::Index n = chain.draws.rows();
  if (n == 0) throw DomainError("cannot summarize an empty chain");
  for (Eigen::Index k = 0; k < chain.draws.cols(); ++k) {
    std::vector<double> col(chain.draws.col(k).data(),
                            chain.draws.col(k).data() + n);
    ParameterSummary s;
    s.name = k < 7 ? kThetaStarNames[static_cast<std::size_t>(k)]
                   : "p" + std::to_string(k);
    double sum = 0.0;
    for (double v : col) sum += v;
    s.mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (double v : col) ss += (v - s.mean) * (v - s.mean);
    s.std = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
    s.mc_error = s.std / std::sqrt(static_cast<double>(n));
    s.q025 = quantile(col, 0.025);
    s.median = quantile(col, 0.5);
    s.q975 = quantile(col, 0.975);
    out.rows.push_back(s);
  }
  return out;
}

void write_chain_csv(std::ostream& os, const Chain& chain) {
  for (std::size_t k = 0; k < kThetaStarNames.size(); ++k) {
    os << (k ? "," : "") << kThetaStarNames[k];
  }
  os << '\n' << std::setprecision(17);
  for (Eigen::Index i = 0; i < chain.draws.rows(); ++i) {
    for (Eigen::Index k = 0; k < chain.draws.cols(); ++k) {
      os << (k ? "," : "") << chain.draws(i, k);
    }
    os << '\n';
  }
}

}  // namespace ssalt
