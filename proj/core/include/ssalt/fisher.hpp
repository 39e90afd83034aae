#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>

#include "ssalt/types.hpp"

namespace ssalt {

using Mat7 = Eigen::Matrix<double, 7, 7>;
using Vec7 = Eigen::Matrix<double, 7, 1>;

/// All parameter indices below are 0-based positions in the natural order
/// (mu_X1, mu_X2, mu_Y1, mu_Y2, sigma_X^2, sigma_Y^2, rho); see ssalt::param.

/// j-th derivative of the standard normal cdf, j = 0..3.
double phi_deriv(int j, double z);

/// The building blocks of the censored-marker density of a two-level plan,
///   P_C(y) = c_y sum_k (-1)^(k-1) e^((k-1) beta) Phi(c(k,1)) phi(c(k,2)),
/// with their first and second partial derivatives. Entries that are
/// identically zero are stored as exact zeros.
struct PcmCoefficients {
  double cy = 0.0;
  double beta = 0.0;
  std::array<double, 2> c1{};  // c(k,1), k = 1, 2
  std::array<double, 2> c2{};  // c(k,2)
  Vec7 cy_d = Vec7::Zero();
  Vec7 beta_d = Vec7::Zero();
  std::array<Vec7, 2> c1_d{Vec7::Zero(), Vec7::Zero()};
  std::array<Vec7, 2> c2_d{Vec7::Zero(), Vec7::Zero()};
  Mat7 cy_dd = Mat7::Zero();
  Mat7 beta_dd = Mat7::Zero();
  std::array<Mat7, 2> c1_dd{Mat7::Zero(), Mat7::Zero()};
  std::array<Mat7, 2> c2_dd{Mat7::Zero(), Mat7::Zero()};
};

/// Coefficient registry at marker value y. Throws UnsupportedPlanError
/// unless m = 2.
PcmCoefficients pcm_coefficients(double y, const ThetaNatural& theta,
                                 const StressPlan& plan);

/// lambda(y; r, k, j1, j2): weight of Phi^(j1)(c(k,1)) Phi^(j2)(c(k,2)) in
/// the first derivative; k = 1, 2; j1 in 0..2; j2 in 1..3.
double pcm_lambda(const PcmCoefficients& c, int r, int k, int j1, int j2);
/// gamma(y; r, s, k, j1, j2): weight in the second derivative.
double pcm_gamma(const PcmCoefficients& c, int r, int s, int k, int j1, int j2);

/// g(y; r) = dP_C(y)/dtheta_r.
double pcm_gradient(double y, int r, const ThetaNatural& theta,
                    const StressPlan& plan);
/// h(y; r, s) = -d^2 P_C(y)/dtheta_r dtheta_s: the gamma expansion carries
/// the sign (-1)^k, i.e. the negated second derivative.
double pcm_hessian(double y, int r, int s, const ThetaNatural& theta,
                   const StressPlan& plan);

struct PcmDerivatives {
  double value = 0.0;  // P_C(y)
  Vec7 g = Vec7::Zero();
  Mat7 h = Mat7::Zero();
};
/// Value, g and h together (one registry evaluation).
PcmDerivatives pcm_derivatives(double y, const ThetaNatural& theta,
                               const StressPlan& plan);

/// alpha_{r,s}: -d^2/dtheta_r dtheta_s of log[(sigma_X sigma_Y)^-1
/// (1 - rho^2)^-1/2]; nonzero only on (4,4), (5,5), (6,6).
double alpha_term(int r, int s, const ThetaNatural& theta);
Mat7 alpha_matrix(const ThetaNatural& theta);

/// zeta_j(r, s) = K_-1 E_j(1/T) + K_0 + K_1 E_j(T): the conditional mean of
/// t^-1 d^2 Q_j / dtheta_r dtheta_s for an item failing in piece j. With y
/// integrated analytically (Y | T is normal) only these moments of the
/// piece-restricted, normalized failure-time density remain.
struct ZetaCoefficients {
  Mat7 k_minus1 = Mat7::Zero();
  Mat7 k0 = Mat7::Zero();
  Mat7 k1 = Mat7::Zero();
};
ZetaCoefficients zeta_coefficients(int piece, const ThetaNatural& theta,
                                   const StressPlan& plan);

struct PieceMoments {
  double mass = 0.0;         // p_j
  double mean_inverse = 0.0; // E_j(1/T)
  double mean = 0.0;         // E_j(T)
};
PieceMoments piece_moments(int piece, const ThetaNatural& theta,
                           const StressPlan& plan);

Mat7 zeta_matrix(int piece, const ThetaNatural& theta, const StressPlan& plan);
double zeta(int piece, int r, int s, const ThetaNatural& theta,
            const StressPlan& plan);

/// phi(r, s) = int h(y; r, s) dy + int g(y; r) g(y; s) / P_C(y) dy over the
/// whole matrix, plus the censored marker mass S = int P_C dy.
struct VarphiResult {
  Mat7 varphi = Mat7::Zero();
  double mass = 0.0;
};
VarphiResult varphi_matrix(const ThetaNatural& theta, const StressPlan& plan);
double varphi(int r, int s, const ThetaNatural& theta, const StressPlan& plan);

/// How the per-category blocks enter E(-d^2 logL | nu_1, nu_2).
enum class FisherAssembly {
  /// (nu_1 + nu_2) alpha + nu_1 zeta_1 + nu_2 zeta_2 + n_c phi / S: the
  /// conditional expectation under the sampling law (default).
  kExpectation,
  /// (nu_1 G_1(tau) + nu_2 (G_2(C) - G_2(tau))) alpha + nu_1 zeta_1 +
  /// nu_2 zeta_2 + n_c phi, the literal display (diagnostics only).
  kPrinted,
};

/// The blocks shared by every (nu_1, nu_2) term.
struct FisherBlocks {
  Mat7 alpha = Mat7::Zero();
  Mat7 zeta1 = Mat7::Zero();
  Mat7 zeta2 = Mat7::Zero();
  Mat7 varphi = Mat7::Zero();
  double censored_mass = 0.0;  // S
  double p1 = 0.0;             // G_1(tau)
  double p2 = 0.0;             // G_2(C) - G_2(tau)
};
FisherBlocks fisher_blocks(const ThetaNatural& theta, const StressPlan& plan);

Mat7 expected_hessian_given_counts(int nu1, int nu2, int n,
                                   const FisherBlocks& blocks,
                                   FisherAssembly assembly =
                                       FisherAssembly::kExpectation);
Mat7 expected_hessian_given_counts(int nu1, int nu2, int n,
                                   const ThetaNatural& theta,
                                   const StressPlan& plan,
                                   FisherAssembly assembly =
                                       FisherAssembly::kExpectation);

struct InfoMatrix {
  Mat7 matrix = Mat7::Zero();
  int n = 0;
  double tau = 0.0;
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
};

/// Multinomial double sum over (nu_1, nu_2) of expected_hessian_given_counts.
InfoMatrix fisher_matrix_multinomial(const ThetaNatural& theta,
                                     const StressPlan& plan, int n,
                                     FisherAssembly assembly =
                                         FisherAssembly::kExpectation);
/// The same expectation through the affine shortcut n [p_1 (.) + p_2 (.) +
/// (1 - p_1 - p_2) (.)].
InfoMatrix fisher_matrix(const ThetaNatural& theta, const StressPlan& plan,
                         int n,
                         FisherAssembly assembly = FisherAssembly::kExpectation);

/// Monte Carlo oracle: n times the mean over replicates * n simulated items
/// of the central-difference negative Hessian of the item log density at
/// theta (steps 1e-4 |theta_r|).
InfoMatrix numeric_fisher(const ThetaNatural& theta, const StressPlan& plan,
                          int n, int replicates, std::uint64_t seed,
                          unsigned threads = 1);

}  // namespace ssalt
