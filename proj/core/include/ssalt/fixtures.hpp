#pragma once

#include <array>
#include <vector>

#include "ssalt/types.hpp"

namespace ssalt::fixtures {

/// A data row exactly as printed: wire code delta, time, marker.
struct RawRow {
  int delta = 0;
  double t = 0.0;
  double y = 0.0;
};

/// Simulation parameters theta* of the worked example.
ThetaLink table1_theta_star();
/// The natural drifts printed beside them (mu_X1, mu_X2, mu_Y1, mu_Y2).
std::array<double, 4> table1_printed_drifts();

/// S_0 = 950, S_1 = 1200, S_2 = 1400 (degrees C), C = 700, D = 1.
StressPlan example_plan(double tau);

/// The 30 simulated rows for tau in {300, 400, 500}, as printed.
std::vector<RawRow> table3_raw(int tau);
/// The same rows as a validated Dataset. Two printed rows contradict their
/// own piece intervals and are relabeled: (tau = 300) delta 1 at t = 699 is
/// read as a piece-2 failure, and (tau = 500) delta 2 at t = 500 = tau as a
/// piece-1 failure (pieces are (tau_{j-1}, tau_j]).
Dataset table3_dataset(int tau);

/// Aluminum reduction cells: 29 failures, S_1 -> piece 1, S_2 -> piece 2,
/// tau = 400, C = 700, D = 1, no censoring.
Dataset table6_dataset();

/// The reported estimates for the cell data. The printed scale values
/// 0.0011 and 0.0188 are read as variances by default; pass false to
/// square them (read as standard deviations).
ThetaNatural section5_estimates(bool sigma_as_variance = true);

}  // namespace ssalt::fixtures
