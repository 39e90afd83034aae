#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "ssalt/types.hpp"

namespace ssalt {

/// Independent priors on theta*: N(0, normal_variance) for a, b, c, d;
/// Jeffreys 1/sigma^2 (or flat) for the variance rates; uniform(-1, 1) for rho.
struct PriorConfig {
  double normal_variance = 1e4;
  bool jeffreys_sigma_x2 = true;
  bool jeffreys_sigma_y2 = true;

  void validate() const;
};

/// Log prior density (up to a constant for the improper parts); -infinity
/// outside the support.
double log_prior(const ThetaLink& theta_star, const PriorConfig& config);

struct MhConfig {
  int total = 50000;
  int burn_in = 10000;
  /// Per-coordinate proposal sds in the sampler's coordinates (a, b, c, d,
  /// log sigma_X^2, log sigma_Y^2, rho). Empty: 1% of |init|, floor 1e-4.
  std::vector<double> scales;
  bool adapt = true;
  double target_acceptance = 0.3;

  void validate() const;
};

/// Draws of a generic componentwise random-walk Metropolis-Hastings run.
struct GenericChain {
  Eigen::MatrixXd draws;  // kept iterations x dimension
  std::vector<long> accepted;  // per coordinate, kept iterations only
  std::vector<double> final_scales;
  int burn_in = 0;
  int total = 0;

  int kept() const { return total - burn_in; }
  double acceptance_rate() const;
};

/// Componentwise Gaussian random walk on an unnormalized log target: every
/// iteration updates each coordinate in turn. During burn-in each scale
/// follows a Robbins-Monro recursion log s += (accept - target)/(i+1)^0.6;
/// scales are frozen afterwards so the kept draws come from a fixed kernel.
GenericChain rw_mh_generic(
    const std::function<double(const Eigen::VectorXd&)>& log_target,
    const Eigen::VectorXd& init, const std::vector<double>& scales,
    const MhConfig& config, std::uint64_t seed);

/// Posterior draws over theta* (natural scale, theta* order).
struct Chain {
  Eigen::MatrixXd draws;  // kept x 7
  long accepted = 0;      // accepted coordinate moves after burn-in
  int burn_in = 0;
  int total = 0;
  std::vector<double> final_scales;

  int kept() const { return total - burn_in; }
  /// Accepted moves per proposed coordinate move after burn-in.
  double acceptance_rate() const;
};

/// Random-walk MH over theta* with the sample log-likelihood (via the
/// Arrhenius link) plus log_prior. Variance rates move on the log scale,
/// with the Jacobian in the target. Throws DomainError if the posterior at
/// init is -infinity.
Chain rw_mh(const Dataset& data, const ThetaLink& init,
            const PriorConfig& prior, const MhConfig& config,
            std::uint64_t seed);

struct ParameterSummary {
  std::string name;
  double mean = 0.0;
  double std = 0.0;
  double mc_error = 0.0;  // std / sqrt(kept)
  double q025 = 0.0;
  double median = 0.0;
  double q975 = 0.0;
};

struct PosteriorSummary {
  std::vector<ParameterSummary> rows;
  int kept = 0;
  double acceptance_rate = 0.0;
};

/// Mean, sample sd, MC error std/sqrt(N) and linearly interpolated
/// quantiles (type 7) per column.
PosteriorSummary summarize_chain(const Chain& chain);

/// Type-7 quantile of the values (copied and sorted).
double quantile(std::vector<double> values, double p);

inline const std::array<const char*, 7> kThetaStarNames = {
    "a", "b", "c", "d", "sigma_X2", "sigma_Y2", "rho"};

/// One header line then one row per kept draw.
void write_chain_csv(std::ostream& os, const Chain& chain);

}  // namespace ssalt
