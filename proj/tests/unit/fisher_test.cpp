#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "ssalt/fisher.hpp"
#include "ssalt/fixtures.hpp"
#include "ssalt/likelihood.hpp"
#include "ssalt/model.hpp"
#include "ssalt/normal.hpp"
#include "ssalt/simulate.hpp"

namespace ssalt {
namespace {

using testing::table1_theta;

Eigen::VectorXd flat(const ThetaNatural& t) {
  Eigen::VectorXd v(7);
  v << t.mu_x[0], t.mu_x[1], t.mu_y[0], t.mu_y[1], t.sigma_x2, t.sigma_y2,
      t.rho;
  return v;
}

ThetaNatural unflat(const Eigen::VectorXd& v) {
  return ThetaNatural::from_vector(std::vector<double>(v.data(), v.data() + 7));
}

// Parameter scales used to compare entries of different units: derivatives
// are taken with respect to theta_r / scale_r.
Vec7 scales(const ThetaNatural& t) {
  Vec7 s = flat(t).cwiseAbs();
  s[6] = 1.0;
  return s;
}

// Evaluation points: perturbed Table-1 parameters, markers spread over the
// bulk of the censored-marker density.
struct Point {
  ThetaNatural theta;
  double y;
};

std::vector<Point> test_points(const StressPlan& plan) {
  std::vector<Point> points;
  for (unsigned i = 0; i < 20; ++i) {
    const ThetaNatural theta = testing::perturbed(table1_theta(400), i);
    const auto k = piece_kernels(plan.censor_time, 0.0, theta, plan);
    const double sd = std::sqrt(theta.sigma_y2 * plan.censor_time);
    points.push_back({theta, k.mean_y - 2.5 * sd + 5.0 * sd * i / 19.0});
  }
  return points;
}

TEST(PhiDerivatives, ValuesAndFiniteDifferences) {
  EXPECT_NEAR(phi_deriv(1, 0.0), 1.0 / std::sqrt(2.0 * M_PI), 1e-16);
  EXPECT_EQ(phi_deriv(2, 0.0), 0.0);
  for (int j = 0; j < 3; ++j) {
    for (double z : {-2.1, -0.3, 0.8, 1.9}) {
      const double fd = testing::richardson_first(
          [j](double x) { return phi_deriv(j, x); }, z, 1e-3);
      EXPECT_LT(testing::rel_err(phi_deriv(j + 1, z), fd), 1e-6);
    }
  }
}

TEST(CensoredMarkerDerivatives, GradientMatchesFiniteDifferences) {
  const StressPlan plan = fixtures::example_plan(400);
  double worst = 0.0;
  for (const auto& pt : test_points(plan)) {
    const Vec7 s = scales(pt.theta);
    const Eigen::VectorXd x = flat(pt.theta);
    Vec7 analytic, fd;
    for (int r = 0; r < 7; ++r) {
      auto f = [&](double v) {
        Eigen::VectorXd p = x;
        p[r] = v;
        return censored_marker_density(pt.y, unflat(p), plan);
      };
      fd[r] = s[r] * testing::richardson_first(f, x[r], 1e-4 * s[r]);
      analytic[r] = s[r] * pcm_gradient(pt.y, r, pt.theta, plan);
    }
    const double floor = 1e-6 * fd.cwiseAbs().maxCoeff();
    for (int r = 0; r < 7; ++r) {
      const double err =
          std::abs(analytic[r] - fd[r]) / std::max(std::abs(fd[r]), floor);
      worst = std::max(worst, err);
      EXPECT_LT(err, 1e-4) << "r=" << r << " y=" << pt.y;
    }
  }
  RecordProperty("worst_gradient_rel_err", std::to_string(worst));
}

TEST(CensoredMarkerDerivatives, HessianMatchesFiniteDifferences) {
  const StressPlan plan = fixtures::example_plan(400);
  for (const auto& pt : test_points(plan)) {
    const Vec7 s = scales(pt.theta);
    const Eigen::VectorXd x = flat(pt.theta);
    const Eigen::VectorXd h = 1e-3 * s;
    auto f = [&](const Eigen::VectorXd& p) {
      return censored_marker_density(pt.y, unflat(p), plan);
    };
    const PcmDerivatives d = pcm_derivatives(pt.y, pt.theta, plan);
    Mat7 analytic, fd;
    for (int r = 0; r < 7; ++r) {
      for (int c = 0; c < 7; ++c) {
        // h(y; r, s) is the negated second derivative.
        fd(r, c) = -s[r] * s[c] * testing::richardson_second(f, x, r, c, h);
        analytic(r, c) = s[r] * s[c] * pcm_hessian(pt.y, r, c, pt.theta, plan);
        EXPECT_NEAR(analytic(r, c), s[r] * s[c] * d.h(r, c),
                    1e-12 * std::abs(analytic(r, c)));
      }
    }
    const double floor = 1e-6 * fd.cwiseAbs().maxCoeff();
    for (int r = 0; r < 7; ++r) {
      for (int c = 0; c < 7; ++c) {
        const double err = std::abs(analytic(r, c) - fd(r, c)) /
                           std::max(std::abs(fd(r, c)), floor);
        EXPECT_LT(err, 1e-3) << "r=" << r << " s=" << c << " y=" << pt.y;
      }
    }
    EXPECT_LT(testing::rel_err(d.value,
                               censored_marker_density(pt.y, pt.theta, plan)),
              1e-13);
  }
}

// Index pairs (0-based) listed as possibly nonzero.
using Pairs = std::set<std::pair<int, int>>;

void expect_zero_outside(const Mat7& m, const Pairs& allowed,
                         const std::string& what) {
  for (int r = 0; r < 7; ++r) {
    for (int s = 0; s < 7; ++s) {
      if (allowed.count({std::min(r, s), std::max(r, s)})) continue;
      EXPECT_EQ(m(r, s), 0.0) << what << " (" << r << "," << s << ")";
    }
  }
}

TEST(CoefficientRegistry, PrintedZeroPatterns) {
  const StressPlan plan = fixtures::example_plan(400);
  for (const auto& pt : test_points(plan)) {
    const PcmCoefficients c = pcm_coefficients(pt.y, pt.theta, plan);
    // c_y depends on sigma_Y^2 only.
    for (int r = 0; r < 7; ++r) {
      if (r != 5) EXPECT_EQ(c.cy_d[r], 0.0);
    }
    expect_zero_outside(c.cy_dd, {{5, 5}}, "cy");
    // beta_2 is free of the marker parameters and of rho.
    for (int r : {2, 3, 5, 6}) EXPECT_EQ(c.beta_d[r], 0.0);
    expect_zero_outside(c.beta_dd, {{0, 4}, {1, 4}, {4, 4}}, "beta");
    // c(k, 1): second derivatives only at the listed pairs.
    const Pairs c1_pairs{{0, 4}, {0, 6}, {1, 4}, {1, 6}, {2, 4}, {2, 5},
                         {2, 6}, {3, 4}, {3, 5}, {3, 6}, {4, 4}, {4, 5},
                         {4, 6}, {5, 5}, {5, 6}, {6, 6}};
    for (int k = 0; k < 2; ++k) expect_zero_outside(c.c1_dd[k], c1_pairs, "c1");
    // c(k, 2): free of the degradation drifts.
    for (int k = 0; k < 2; ++k) {
      EXPECT_EQ(c.c2_d[k][0], 0.0);
      EXPECT_EQ(c.c2_d[k][1], 0.0);
    }
    EXPECT_EQ(c.c2_d[0][4], 0.0);
    EXPECT_EQ(c.c2_d[0][6], 0.0);
    expect_zero_outside(c.c2_dd[0], {{2, 5}, {3, 5}, {5, 5}}, "c2 k=1");
    expect_zero_outside(c.c2_dd[1],
                        {{2, 5}, {3, 5}, {4, 4}, {4, 6}, {5, 5}}, "c2 k=2");
  }
}

TEST(CoefficientRegistry, LambdaAndGammaVanishOutsideTheirRanges) {
  const StressPlan plan = fixtures::example_plan(400);
  const ThetaNatural theta = table1_theta(400);
  const PcmCoefficients c = pcm_coefficients(5.0, theta, plan);
  // lambda(r, k, j1, j2) is nonzero only for (0,1), (1,1), (0,2).
  for (int r = 0; r < 7; ++r) {
    for (int k = 1; k <= 2; ++k) {
      EXPECT_EQ(pcm_lambda(c, r, k, 1, 2), 0.0);
      EXPECT_EQ(pcm_lambda(c, r, k, 2, 1), 0.0);
    }
  }
  // Degradation drifts do not enter c(k, 2), so lambda(r, k, 0, 2) = 0.
  for (int k = 1; k <= 2; ++k) {
    EXPECT_EQ(pcm_lambda(c, 0, k, 0, 2), 0.0);
    EXPECT_EQ(pcm_lambda(c, 1, k, 0, 2), 0.0);
    EXPECT_EQ(pcm_gamma(c, 0, 1, k, 0, 3), 0.0);
  }
}

TEST(AlphaTerm, ClosedFormAndFiniteDifferences) {
  ThetaNatural theta = table1_theta(400);
  theta.sigma_x2 = 1.0;
  EXPECT_DOUBLE_EQ(alpha_term(4, 4, theta), -0.5);
  EXPECT_EQ(alpha_term(0, 1, theta), 0.0);
  theta = table1_theta(400);
  auto f = [](const Eigen::VectorXd& v) {
    return -0.5 * std::log(v[4]) - 0.5 * std::log(v[5]) -
           0.5 * std::log(1.0 - v[6] * v[6]);
  };
  const Eigen::VectorXd x = flat(theta);
  const Eigen::VectorXd h = 1e-3 * scales(theta);
  const Mat7 a = alpha_matrix(theta);
  for (int r = 0; r < 7; ++r) {
    for (int s = 0; s < 7; ++s) {
      const double fd = -testing::richardson_second(f, x, r, s, h);
      if (r == s && r >= 4) {
        EXPECT_LT(testing::rel_err(a(r, s), fd), 1e-6) << r;
      } else {
        EXPECT_EQ(a(r, s), 0.0);
        EXPECT_LT(std::abs(fd), 1e-6 * std::abs(a(4, 4)));
      }
      EXPECT_EQ(a(r, s), alpha_term(r, s, theta));
    }
  }
}

TEST(Zeta, PrintedZeroPattern) {
  const StressPlan plan = fixtures::example_plan(400);
  for (unsigned i = 0; i < 5; ++i) {
    const ThetaNatural theta = testing::perturbed(table1_theta(400), i);
    const Mat7 z1 = zeta_matrix(1, theta, plan);
    for (int s = 0; s < 7; ++s) {
      EXPECT_EQ(z1(1, s), 0.0);
      EXPECT_EQ(z1(s, 1), 0.0);
      EXPECT_EQ(z1(3, s), 0.0);
    }
    EXPECT_EQ(zeta(1, 1, 1, theta, plan), 0.0);
    EXPECT_EQ(z1(0, 3), 0.0);
    EXPECT_EQ(z1(2, 3), 0.0);
  }
}

TEST(Zeta, ClosedFormsMatchTheDefiningIntegral) {
  const StressPlan plan = fixtures::example_plan(400);
  const ThetaNatural theta = table1_theta(400);
  for (int j = 1; j <= 2; ++j) {
    const Mat7 z = zeta_matrix(j, theta, plan);
    const Vec7 s = scales(theta);
    const Mat7 ref = testing::ref_zeta_matrix(j, theta, plan);
    const Mat7 scaled_ref = s.asDiagonal() * ref * s.asDiagonal();
    const double floor = 1e-9 * scaled_ref.cwiseAbs().maxCoeff();
    for (int r = 0; r < 7; ++r) {
      for (int c = r; c < 7; ++c) {
        const double a = s[r] * s[c] * z(r, c);
        const double b = scaled_ref(r, c);
        EXPECT_LT(std::abs(a - b) / std::max(std::abs(b), floor), 1e-3)
            << "j=" << j << " (" << r << "," << c << ")";
        EXPECT_NEAR(z(r, c), z(c, r), 1e-13 * std::abs(z(r, c)));
      }
    }
  }
}

TEST(Zeta, ProductRuleAgreesWithAdaptiveQuadrature) {
  // Spot check of the fast oracle against the adaptive one.
  const StressPlan plan = fixtures::example_plan(400);
  const ThetaNatural theta = table1_theta(400);
  const Mat7 fast = testing::ref_zeta_matrix(2, theta, plan);
  for (auto [r, c] : {std::pair{0, 0}, std::pair{1, 6}, std::pair{4, 4}}) {
    EXPECT_LT(testing::rel_err(fast(r, c),
                               testing::ref_zeta(2, r, c, theta, plan)),
              1e-6);
  }
}

TEST(Zeta, SharedMomentRatioOnTheFirstPiece) {
  const StressPlan plan = fixtures::example_plan(400);
  const ThetaNatural theta = table1_theta(400);
  const double rho2 = theta.rho * theta.rho;
  const double expected =
      -2.0 * theta.eta1() * theta.eta2() * (1.0 - rho2) * theta.sigma_x2;
  EXPECT_LT(testing::rel_err(zeta(1, 0, 2, theta, plan) /
                                 zeta(1, 0, 0, theta, plan),
                             expected),
            1e-12);
}

TEST(Zeta, PieceMoments) {
  const StressPlan plan = fixtures::example_plan(400);
  const ThetaNatural theta = table1_theta(400);
  for (int j = 1; j <= 2; ++j) {
    const PieceMoments m = piece_moments(j, theta, plan);
    EXPECT_LT(testing::rel_err(m.mass, piece_probability(j, theta, plan)),
              1e-12);
    const double lo = j == 1 ? 0.0 : 400.0, hi = j == 1 ? 400.0 : 700.0;
    auto f = [&](double t) { return t > 0 ? ig_pdf(t, theta.mu_x[j - 1], theta.sigma_x2, 1.0) : 0.0; };
    const double et = testing::integrate([&](double t) { return t * f(t); }, lo, hi) / m.mass;
    const double einv = testing::integrate([&](double t) { return t > 0 ? f(t) / t : 0.0; }, lo, hi) / m.mass;
    EXPECT_LT(testing::rel_err(m.mean, et), 1e-8);
    EXPECT_LT(testing::rel_err(m.mean_inverse, einv), 1e-8);
  }
}

TEST(Varphi, MatchesMonteCarloOverCensoredMarkers) {
  const StressPlan plan = fixtures::example_plan(400);
  const ThetaNatural theta = table1_theta(400);
  const VarphiResult v = varphi_matrix(theta, plan);
  EXPECT_TRUE(v.varphi.allFinite());
  EXPECT_LT((v.varphi - v.varphi.transpose()).norm(), 1e-12 * v.varphi.norm());
  EXPECT_LT(testing::rel_err(v.mass, censored_marker_mass(theta, plan)), 1e-9);
  EXPECT_DOUBLE_EQ(varphi(2, 5, theta, plan), v.varphi(2, 5));

  // E[-d2 log P_C(Y)] over markers of surviving items equals varphi / S.
  const Vec7 s = scales(theta);
  const Eigen::VectorXd x = flat(theta);
  const Eigen::VectorXd h = 1e-3 * s;
  Mat7 sum = Mat7::Zero();
  int count = 0;
  std::uint64_t item = 0;
  while (count < 100000) {
    RandomStream rng = RandomStream::derive(4242, {item++});
    const Observation obs = sample_observation(theta, plan, rng);
    const auto* c = std::get_if<CensoredObs>(&obs);
    if (!c) continue;
    auto f = [&](const Eigen::VectorXd& p) {
      return log_censored_marker_density(c->marker, unflat(p), plan);
    };
    for (int r = 0; r < 7; ++r) {
      for (int q = r; q < 7; ++q) {
        const double d2 = -testing::richardson_second(f, x, r, q, h);
        sum(r, q) += d2;
        if (q != r) sum(q, r) += d2;
      }
    }
    ++count;
  }
  const Mat7 mc = s.asDiagonal() * (sum / count) * s.asDiagonal();
  const Mat7 analytic = s.asDiagonal() * (v.varphi / v.mass) * s.asDiagonal();
  EXPECT_LT((analytic - mc).norm() / mc.norm(), 5e-2);
}

TEST(ExpectedHessian, AffineInCounts) {
  const StressPlan plan = fixtures::example_plan(400);
  const ThetaNatural theta = table1_theta(400);
  const FisherBlocks b = fisher_blocks(theta, plan);
  const int n = 30;
  for (auto assembly : {FisherAssembly::kExpectation, FisherAssembly::kPrinted}) {
    const Mat7 e0 = expected_hessian_given_counts(0, 5, n, b, assembly);
    const Mat7 e1 = expected_hessian_given_counts(1, 5, n, b, assembly);
    const Mat7 e7 = expected_hessian_given_counts(7, 5, n, b, assembly);
    EXPECT_LT((e7 - e0 - 7.0 * (e1 - e0)).norm(), 1e-10 * e7.norm());
  }
  EXPECT_LT((expected_hessian_given_counts(0, 0, n, b, FisherAssembly::kPrinted) -
             n * b.varphi)
                .norm(),
            1e-12 * b.varphi.norm() * n);
  EXPECT_LT((expected_hessian_given_counts(0, 0, n, b) -
             n * b.varphi / b.censored_mass)
                .norm(),
            1e-12 * n * b.varphi.norm() / b.censored_mass);
  // Term assembly from the blocks.
  const Mat7 direct = expected_hessian_given_counts(4, 6, n, theta, plan);
  const Mat7 manual = 10.0 * b.alpha + 4.0 * b.zeta1 + 6.0 * b.zeta2 +
                      20.0 * b.varphi / b.censored_mass;
  EXPECT_LT((direct - manual).norm(), 1e-12 * manual.norm());
}

TEST(FisherMatrix, MultinomialSumEqualsShortcut) {
  const StressPlan plan = fixtures::example_plan(400);
  const ThetaNatural theta = table1_theta(400);
  for (auto assembly : {FisherAssembly::kExpectation, FisherAssembly::kPrinted}) {
    const Mat7 sum = fisher_matrix_multinomial(theta, plan, 30, assembly).matrix;
    const Mat7 shortcut = fisher_matrix(theta, plan, 30, assembly).matrix;
    EXPECT_LT((sum - shortcut).norm() / shortcut.norm(), 1e-10);
  }
  const InfoMatrix one = fisher_matrix(theta, plan, 30);
  const InfoMatrix two = fisher_matrix(theta, plan, 60);
  EXPECT_LT((two.matrix - 2.0 * one.matrix).norm(), 1e-12 * two.matrix.norm());
  EXPECT_EQ(one.n, 30);
  EXPECT_EQ(one.tau, 400.0);
}

TEST(FisherMatrix, SymmetricPositiveSemidefiniteNearTableOne) {
  const StressPlan plan = fixtures::example_plan(400);
  for (unsigned i = 0; i < 20; ++i) {
    const ThetaNatural theta = testing::perturbed(table1_theta(400), 100 + i);
    const Mat7 m = fisher_matrix(theta, plan, 30).matrix;
    const double norm = m.norm();
    for (int r = 0; r < 7; ++r) {
      for (int s = 0; s < 7; ++s) {
        EXPECT_LE(std::abs(m(r, s) - m(s, r)),
                  1e-8 * std::max(std::abs(m(r, s)), 1e-300));
      }
    }
    Eigen::SelfAdjointEigenSolver<Mat7> eig(m);
    EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-6 * norm) << "draw " << i;
  }
}

TEST(NumericFisher, DeterministicAndConverging) {
  const StressPlan plan = fixtures::example_plan(400);
  const ThetaNatural theta = table1_theta(400);
  const InfoMatrix a = numeric_fisher(theta, plan, 30, 20, 9);
  const InfoMatrix b = numeric_fisher(theta, plan, 30, 20, 9, 3);
  EXPECT_EQ(a.matrix, b.matrix);
  EXPECT_EQ(a.matrix, a.matrix.transpose());
  const Mat7 analytic = fisher_matrix(theta, plan, 30).matrix;
  const Vec7 s = scales(theta);
  auto err = [&](int reps) {
    const Mat7 m = numeric_fisher(theta, plan, 30, reps, 1234).matrix;
    return (s.asDiagonal() * (m - analytic) * s.asDiagonal()).norm() /
           (s.asDiagonal() * analytic * s.asDiagonal()).norm();
  };
  const double e_small = err(100);
  const double e_large = err(10000);
  EXPECT_LT(e_large, e_small);
  EXPECT_LT(e_large, 0.05);
}

}  // namespace
}  // namespace ssalt
