// Acceptance checks. Usage: ssalt_acceptance <criterion 1..8> [unit-test
// binary for criterion 8]. Prints "criterion N: PASS|FAIL" followed by the
// measured quantities, and exits non-zero on FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "ssalt/bayes.hpp"
#include "ssalt/fisher.hpp"
#include "ssalt/fixtures.hpp"
#include "ssalt/model.hpp"
#include "ssalt/planner.hpp"
#include "ssalt/simulate.hpp"

namespace ssalt {
namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> lines;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    lines.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
};

template <class... Args>
std::string fmt(const char* format, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

Vec7 flat(const ThetaNatural& t) {
  Vec7 v;
  const auto x = t.to_vector();
  for (int i = 0; i < 7; ++i) v[i] = x[i];
  return v;
}

ThetaNatural unflat(const Eigen::VectorXd& v) {
  return ThetaNatural::from_vector(std::vector<double>(v.data(), v.data() + 7));
}

// Per-parameter scales: entries of different units are compared after
// rescaling each coordinate by its magnitude (rho by 1).
Vec7 scales(const ThetaNatural& t) {
  Vec7 s = flat(t).cwiseAbs();
  s[6] = 1.0;
  return s;
}

// |a - b| <= half a unit in the sixth significant figure of b.
bool six_figures(double a, double b) {
  const double unit = std::pow(10.0, std::floor(std::log10(std::abs(b))) - 5);
  return std::abs(a - b) <= 0.5 * unit;
}

Outcome link_arithmetic() {
  Outcome out;
  const ThetaNatural theta = link_to_natural(fixtures::table1_theta_star(),
                                             fixtures::example_plan(400));
  const auto printed = fixtures::table1_printed_drifts();
  const double got[4] = {theta.mu_x[0], theta.mu_x[1], theta.mu_y[0],
                         theta.mu_y[1]};
  const char* names[4] = {"mu_X1", "mu_X2", "mu_Y1", "mu_Y2"};
  for (int i = 0; i < 4; ++i) {
    out.check(six_figures(got[i], printed[i]),
              fmt("%s = %.10g (printed %.10g)", names[i], got[i], printed[i]));
  }
  return out;
}

Outcome density_consistency() {
  Outcome out;
  for (double tau : {300.0, 400.0, 500.0}) {
    const StressPlan plan = fixtures::example_plan(tau);
    const ThetaNatural theta = testing::table1_theta(tau);
    const auto k = piece_kernels(plan.censor_time, 0.0, theta, plan);
    const double sd = std::sqrt(theta.sigma_y2 * plan.censor_time);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      const double y = k.mean_y - 4.0 * sd + 8.0 * sd * i / 49.0;
      worst = std::max(
          worst, testing::rel_err(censored_marker_density(y, theta, plan),
                                  testing::ref_censored_density(y, theta, plan)));
    }
    out.check(worst < 1e-6,
              fmt("tau=%g: closed-form P_C vs quadrature, max rel err %.2e",
                  tau, worst));
    const double failing = testing::ref_piece_mass(1, theta, plan) +
                           testing::ref_piece_mass(2, theta, plan);
    const double surviving = testing::integrate(
        [&](double x) { return testing::ref_p3(x, theta, plan); },
        plan.threshold - 15.0, plan.threshold);
    const double total = failing + surviving;
    out.check(std::abs(total - 1.0) < 1e-6,
              fmt("tau=%g: total probability %.6f (failing %.6f + censored "
                  "%.6f)",
                  tau, total, failing, surviving));
  }
  return out;
}

Outcome appendix_verification() {
  Outcome out;
  const StressPlan plan = fixtures::example_plan(400);
  double worst_g = 0.0, worst_h = 0.0;
  for (unsigned i = 0; i < 20; ++i) {
    const ThetaNatural theta = testing::perturbed(testing::table1_theta(400), i);
    const auto k = piece_kernels(plan.censor_time, 0.0, theta, plan);
    const double sd = std::sqrt(theta.sigma_y2 * plan.censor_time);
    const double y = k.mean_y - 2.5 * sd + 5.0 * sd * i / 19.0;
    const Vec7 s = scales(theta);
    const Eigen::VectorXd x = flat(theta);
    auto f = [&](const Eigen::VectorXd& p) {
      return censored_marker_density(y, unflat(p), plan);
    };
    const PcmDerivatives d = pcm_derivatives(y, theta, plan);
    Vec7 g_fd, g_an;
    Mat7 h_fd, h_an;
    for (int r = 0; r < 7; ++r) {
      auto fr = [&](double v) {
        Eigen::VectorXd p = x;
        p[r] = v;
        return f(p);
      };
      g_fd[r] = s[r] * testing::richardson_first(fr, x[r], 1e-4 * s[r]);
      g_an[r] = s[r] * d.g[r];
      for (int c = 0; c < 7; ++c) {
        h_fd(r, c) = -s[r] * s[c] *
                     testing::richardson_second(f, x, r, c, 1e-3 * s);
        h_an(r, c) = s[r] * s[c] * d.h(r, c);
      }
    }
    const double gfloor = 1e-6 * g_fd.cwiseAbs().maxCoeff();
    const double hfloor = 1e-6 * h_fd.cwiseAbs().maxCoeff();
    for (int r = 0; r < 7; ++r) {
      worst_g = std::max(worst_g, std::abs(g_an[r] - g_fd[r]) /
                                      std::max(std::abs(g_fd[r]), gfloor));
      for (int c = 0; c < 7; ++c) {
        worst_h = std::max(worst_h, std::abs(h_an(r, c) - h_fd(r, c)) /
                                        std::max(std::abs(h_fd(r, c)), hfloor));
      }
    }
  }
  out.check(worst_g < 1e-4,
            fmt("g(y;r) vs finite differences, 20 points: max rel err %.2e",
                worst_g));
  out.check(worst_h < 1e-3,
            fmt("h(y;r,s) vs finite differences, 20 points: max rel err %.2e",
                worst_h));

  // Printed zero patterns.
  bool zeros = true;
  for (unsigned i = 0; i < 20; ++i) {
    const ThetaNatural theta = testing::perturbed(testing::table1_theta(400), i);
    const PcmCoefficients c = pcm_coefficients(4.0, theta, plan);
    for (int r = 0; r < 7; ++r) {
      if (r != 5) zeros = zeros && c.cy_d[r] == 0.0;
    }
    for (int r : {2, 3, 5, 6}) zeros = zeros && c.beta_d[r] == 0.0;
    for (int kk = 0; kk < 2; ++kk) {
      zeros = zeros && c.c2_d[kk][0] == 0.0 && c.c2_d[kk][1] == 0.0;
    }
    const Mat7 z1 = zeta_matrix(1, theta, plan);
    for (int s = 0; s < 7; ++s) {
      zeros = zeros && z1(1, s) == 0.0 && z1(3, s) == 0.0;
    }
    zeros = zeros && z1(0, 3) == 0.0 && z1(2, 3) == 0.0;
    const Mat7 a = alpha_matrix(theta);
    for (int r = 0; r < 7; ++r) {
      for (int s = 0; s < 7; ++s) {
        if (!(r == s && r >= 4)) zeros = zeros && a(r, s) == 0.0;
      }
    }
  }
  out.check(zeros, "printed zero patterns hold exactly at 20 parameter points");

  const ThetaNatural theta = testing::table1_theta(400);
  const Vec7 s = scales(theta);
  double worst_z = 0.0;
  for (int j = 1; j <= 2; ++j) {
    const Mat7 z = zeta_matrix(j, theta, plan);
    const Mat7 ref = s.asDiagonal() * testing::ref_zeta_matrix(j, theta, plan) *
                     s.asDiagonal();
    const double floor = 1e-9 * ref.cwiseAbs().maxCoeff();
    for (int r = 0; r < 7; ++r) {
      for (int c = r; c < 7; ++c) {
        const double a = s[r] * s[c] * z(r, c);
        worst_z = std::max(worst_z, std::abs(a - ref(r, c)) /
                                        std::max(std::abs(ref(r, c)), floor));
      }
    }
  }
  out.check(worst_z < 1e-3,
            fmt("zeta_j closed forms vs double integral, 28 pairs x 2 pieces: "
                "max rel err %.2e",
                worst_z));
  return out;
}

Outcome fisher_matrix_check() {
  Outcome out;
  const StressPlan plan = fixtures::example_plan(400);
  const ThetaNatural theta = testing::table1_theta(400);
  const Mat7 sum = fisher_matrix_multinomial(theta, plan, 30).matrix;
  const Mat7 analytic = fisher_matrix(theta, plan, 30).matrix;
  const double identity = (sum - analytic).norm() / analytic.norm();
  out.check(identity < 1e-10,
            fmt("multinomial sum vs affine shortcut: rel Frobenius %.2e",
                identity));
  const Mat7 mc = numeric_fisher(theta, plan, 30, 2000, 20240611).matrix;
  const Vec7 s = scales(theta);
  const double scaled =
      (s.asDiagonal() * (mc - analytic) * s.asDiagonal()).norm() /
      (s.asDiagonal() * analytic * s.asDiagonal()).norm();
  const double plain = (mc - analytic).norm() / analytic.norm();
  out.check(scaled < 0.05,
            fmt("fisher_matrix vs numeric oracle (2000 datasets, n=30): rel "
                "Frobenius %.4f in scaled coordinates",
                scaled));
  out.lines.push_back(
      fmt("     (unscaled natural coordinates: %.4f)", plain));
  return out;
}

Outcome mle_study() {
  Outcome out;
  const StressPlan plan = fixtures::example_plan(400);
  const ThetaNatural truth = testing::table1_theta(400);
  const McStudyReport report = mc_study(500, 30, truth, plan, 20240611);
  // Table 2, tau = 400 row.
  const double printed_rbias[7] = {-0.236005, -0.157394, -0.033721, -0.033851,
                                   0.062744,  -0.017047, 0.012246};
  for (int k = 0; k < 7; ++k) {
    const McRow& row = report.rows[k];
    const bool same = std::signbit(row.rbias) == std::signbit(printed_rbias[k]);
    out.check(same, fmt("%-8s Rbias %+.4f (printed %+.4f), RRMSE %.4f",
                        row.name.c_str(), row.rbias, printed_rbias[k],
                        row.rrmse));
  }
  const double rrmse = report.rows[0].rrmse;
  out.check(rrmse >= 0.15 && rrmse <= 0.45,
            fmt("RRMSE(mu_X1) = %.4f in [0.15, 0.45]", rrmse));
  out.lines.push_back(fmt("     replicates %zu, non-converged %zu",
                          report.replicates, report.nonconverged));
  return out;
}

Outcome bayes_check() {
  Outcome out;
  MhConfig config;
  config.total = 50000;
  config.burn_in = 10000;
  const Chain chain = rw_mh(fixtures::table3_dataset(400),
                            fixtures::table1_theta_star(), PriorConfig{},
                            config, 20240611);
  const PosteriorSummary s = summarize_chain(chain);
  const double printed[3] = {0.001817, 0.001924, 0.5896};
  for (int k = 0; k < 3; ++k) {
    const auto& row = s.rows[4 + k];
    const double rel = row.mean / printed[k] - 1.0;
    out.check(std::abs(rel) <= 0.10,
              fmt("%-8s posterior mean %.6g (printed %.6g, %+.1f%%)",
                  row.name.c_str(), row.mean, printed[k], 100.0 * rel));
  }
  bool exact = s.kept == 40000;
  for (const auto& row : s.rows) {
    exact = exact && row.mc_error == row.std / std::sqrt(40000.0);
  }
  out.check(exact, "mc_error == std / sqrt(40000) for all 7 parameters");
  out.lines.push_back(
      fmt("     acceptance rate %.3f", s.acceptance_rate));
  return out;
}

Outcome planner_check() {
  Outcome out;
  const double tau_ref[9] = {570.66, 572.53, 575.02, 577.30, 579.29,
                             581.03, 582.56, 583.93, 585.21};
  const double cv_ref[9] = {1.102, 1.556, 2.050, 2.620, 3.304,
                            4.155, 5.257, 6.775, 9.110};
  std::vector<double> grid;
  for (int i = 1; i <= 9; ++i) grid.push_back(0.1 * i);
  const auto rows = plan_report(grid, fixtures::section5_estimates(),
                                fixtures::example_plan(400), 29);
  for (int i = 0; i < 9; ++i) {
    const bool tau_ok = std::abs(rows[i].tau_star - tau_ref[i]) <= 5.0;
    const bool cv_ok = std::abs(rows[i].cv / cv_ref[i] - 1.0) <= 0.10;
    out.check(tau_ok && cv_ok,
              fmt("p=%.1f tau* %.2f (printed %.2f)  C.V. %.4f (printed %.3f)",
                  grid[i], rows[i].tau_star, tau_ref[i], rows[i].cv,
                  cv_ref[i]));
  }
  bool tau_mono = true, cv_mono = true;
  for (int i = 1; i < 9; ++i) {
    tau_mono = tau_mono && rows[i].tau_star >= rows[i - 1].tau_star;
    cv_mono = cv_mono && rows[i].cv > rows[i - 1].cv;
  }
  out.check(tau_mono, "tau* nondecreasing in p");
  out.check(cv_mono, "C.V. increasing in p");
  return out;
}

Outcome property_suite(const std::string& binary) {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  const std::string command = "\"" + binary + "\" --gtest_brief=1";
  const int status = std::system(command.c_str());
  const double minutes =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count() /
      60.0;
  out.check(status == 0, fmt("unit suite exit status %d", status));
  out.check(minutes < 30.0, fmt("unit suite wall time %.2f min", minutes));
  return out;
}

}  // namespace
}  // namespace ssalt

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: ssalt_acceptance <1..8> [unit-test binary]\n";
    return 2;
  }
  const int n = std::atoi(argv[1]);
  using ssalt::Outcome;
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  switch (n) {
    case 1: out = ssalt::link_arithmetic(); break;
    case 2: out = ssalt::density_consistency(); break;
    case 3: out = ssalt::appendix_verification(); break;
    case 4: out = ssalt::fisher_matrix_check(); break;
    case 5: out = ssalt::mle_study(); break;
    case 6: out = ssalt::bayes_check(); break;
    case 7: out = ssalt::planner_check(); break;
    case 8:
      if (argc < 3) {
        std::cerr << "criterion 8 needs the unit-test binary path\n";
        return 2;
      }
      out = ssalt::property_suite(argv[2]);
      break;
    default:
      std::cerr << "unknown criterion " << n << '\n';
      return 2;
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  std::cout << "criterion " << n << ": " << (out.pass ? "PASS" : "FAIL")
            << '\n';
  for (const auto& line : out.lines) std::cout << "  " << line << '\n';
  std::cout << "  runtime " << std::fixed << std::setprecision(1) << seconds
            << " s\n";
  return out.pass ? 0 : 1;
}
