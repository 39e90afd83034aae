#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ssalt/likelihood.hpp"
#include "ssalt/rng.hpp"
#include "ssalt/types.hpp"

namespace ssalt {

/// Draws one (delta, t, y) record from the model law by composition: pick
/// the failure piece or survival from the piece probabilities, invert the
/// piece's inverse Gaussian cdf for t and draw y | t; survivors draw X(C)
/// by rejection from its normal kernel and then y | X(C).
Observation sample_observation(const ThetaNatural& theta,
                               const StressPlan& plan, RandomStream& rng);

/// n items; item i uses the stream derived from (seed, replicate, i).
Dataset simulate_dataset(std::size_t n, const ThetaNatural& theta,
                         const StressPlan& plan, std::uint64_t seed,
                         std::uint64_t replicate = 0);

/// Euler discretization of the correlated Wiener pair (steps split at the
/// stress changes); failure at the first grid crossing of D with linear
/// interpolation of the crossing time and marker. A diagnostic oracle.
Observation path_oracle_sample(const ThetaNatural& theta,
                               const StressPlan& plan, double dt,
                               RandomStream& rng);

struct McRow {
  std::string name;
  double truth = 0.0;
  double mean = 0.0;
  double rbias = 0.0;
  double rrmse = 0.0;
};

struct McStudyReport {
  std::vector<McRow> rows;  // natural parameter order
  std::size_t replicates = 0;
  std::size_t sample_size = 0;
  std::size_t nonconverged = 0;
  std::uint64_t seed = 0;
  /// Per-replicate estimates (row = replicate, natural order).
  std::vector<std::vector<double>> estimates;
};

struct McStudyOptions {
  FitOptions fit{};
  /// Start each fit at the generating value (the jittered multi-starts
  /// still explore around it); otherwise use the moment heuristic.
  bool start_at_truth = true;
  unsigned threads = 1;
};

/// Simulate-then-fit Monte Carlo study: Rbias = (mean est - truth) / truth,
/// RRMSE = sqrt(mean (est - truth)^2) / truth per natural parameter.
/// Replicate r uses streams derived from (seed, r, item), so the report is
/// identical for any thread count.
McStudyReport mc_study(std::size_t replicates, std::size_t n,
                       const ThetaNatural& truth, const StressPlan& plan,
                       std::uint64_t seed, const McStudyOptions& options = {});

/// Names of the natural parameters for m levels (mu_X1.., mu_Y1..,
/// sigma_X2, sigma_Y2, rho).
std::vector<std::string> natural_parameter_names(std::size_t m);

}  // namespace ssalt
