#include "ssalt/fisher.hpp"

#include <cmath>
#include <vector>

#include "ssalt/error.hpp"
#include "ssalt/likelihood.hpp"
#include "ssalt/model.hpp"
#include "ssalt/normal.hpp"
#include "ssalt/parallel.hpp"
#include "ssalt/quadrature.hpp"
#include "ssalt/simulate.hpp"

namespace ssalt {

namespace {

using namespace param;

void require_two_levels(const StressPlan& plan, const ThetaNatural& theta) {
  if (plan.levels() != 2 || theta.levels() != 2) {
    throw UnsupportedPlanError(
        "Fisher information is implemented for two-level plans only");
  }
}

void check_index(int r) {
  if (r < 0 || r >= static_cast<int>(kCount)) {
    throw DomainError("parameter index must be in 0..6");
  }
}

/// Phi^(j)(z) / phi(z) for j >= 1.
double hermite_factor(int j, double z) {
  switch (j) {
    case 1:
      return 1.0;
    case 2:
      return -z;
    case 3:
      return z * z - 1.0;
    default:
      return 0.0;
  }
}

/// e^((k-1) beta) Phi^(j1)(c(k,1)) Phi^(j2)(c(k,2)) evaluated in log space.
struct ProductTable {
  // [k][j1][j2] with j1 = 0..2, j2 = 1..3 stored at j2 - 1.
  double v[2][3][3] = {};
};

ProductTable products(const PcmCoefficients& c) {
  ProductTable t;
  for (int k = 0; k < 2; ++k) {
    const double a = c.c1[static_cast<std::size_t>(k)];
    const double b = c.c2[static_cast<std::size_t>(k)];
    const double log_base = k * c.beta + normal::log_pdf(b);
    const double with_cdf = std::exp(log_base + normal::log_cdf(a));
    const double with_pdf = std::exp(log_base + normal::log_pdf(a));
    for (int j1 = 0; j1 < 3; ++j1) {
      const double left = j1 == 0 ? with_cdf : with_pdf * hermite_factor(j1, a);
      for (int j2 = 1; j2 <= 3; ++j2) {
        t.v[k][j1][j2 - 1] = left * hermite_factor(j2, b);
      }
    }
  }
  return t;
}

double first_derivative(const PcmCoefficients& c, const ProductTable& t,
                        int r) {
  double g = 0.0;
  for (int k = 1; k <= 2; ++k) {
    const double sign = k == 1 ? 1.0 : -1.0;
    for (int j1 = 0; j1 < 3; ++j1) {
      for (int j2 = 1; j2 <= 3; ++j2) {
        const double lam = pcm_lambda(c, r, k, j1, j2);
        if (lam != 0.0) g += sign * lam * t.v[k - 1][j1][j2 - 1];
      }
    }
  }
  return g;
}

double negated_second_derivative(const PcmCoefficients& c,
                                 const ProductTable& t, int r, int s) {
  double h = 0.0;
  for (int k = 1; k <= 2; ++k) {
    const double sign = k == 1 ? -1.0 : 1.0;  // (-1)^k
    for (int j1 = 0; j1 < 3; ++j1) {
      for (int j2 = 1; j2 <= 3; ++j2) {
        const double gam = pcm_gamma(c, r, s, k, j1, j2);
        if (gam != 0.0) h += sign * gam * t.v[k - 1][j1][j2 - 1];
      }
    }
  }
  return h;
}

void set_sym(Mat7& m, std::size_t r, std::size_t s, double v) {
  m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s)) = v;
  m(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(r)) = v;
}

}  // namespace

double phi_deriv(int j, double z) { return normal::cdf_derivative(j, z); }

PcmCoefficients pcm_coefficients(double y, const ThetaNatural& theta,
                                 const StressPlan& plan) {
  require_two_levels(plan, theta);
  const double d = plan.threshold;
  const double cc = plan.censor_time;
  const double tau = plan.change_times[0];
  const double rest = cc - tau;
  const double v = theta.sigma_x2;
  const double w = theta.sigma_y2;
  const double rho = theta.rho;
  const double one_m_rho2 = 1.0 - rho * rho;
  if (!(one_m_rho2 > 0.0)) throw DomainError("|rho| must be below 1");
  const double mean_x = theta.mu_x[0] * tau + theta.mu_x[1] * rest;
  const double p = d - mean_x;
  const double q = y - theta.mu_y[0] * tau - theta.mu_y[1] * rest;
  const double eta4 = theta.eta4();

  PcmCoefficients c;
  // c_y = (sigma_Y^2 C)^-1/2.
  c.cy = 1.0 / std::sqrt(w * cc);
  c.cy_d[kSigmaY2] = -c.cy / (2.0 * w);
  c.cy_dd(kSigmaY2, kSigmaY2) = 3.0 * c.cy / (4.0 * w * w);

  // beta = 2 D (D - P) / (sigma_X^2 C).
  c.beta = 2.0 * d * mean_x / (v * cc);
  c.beta_d[kMuX1] = 2.0 * d * tau / (v * cc);
  c.beta_d[kMuX2] = 2.0 * d * rest / (v * cc);
  c.beta_d[kSigmaX2] = -c.beta / v;
  set_sym(c.beta_dd, kMuX1, kSigmaX2, -2.0 * d * tau / (v * v * cc));
  set_sym(c.beta_dd, kMuX2, kSigmaX2, -2.0 * d * rest / (v * v * cc));
  c.beta_dd(kSigmaX2, kSigmaX2) = 2.0 * c.beta / (v * v);

  // c(k,1) = e P - g q - (k-1) 2 D (1 - rho^2) e with e = eta_3 and
  // g = eta_3 rho sigma_X / sigma_Y = rho (sigma_Y^2 (1 - rho^2) C)^-1/2.
  const double e = theta.eta3(cc);
  const double g = rho / std::sqrt(w * one_m_rho2 * cc);
  // g eta_5 with eta_5 = 1/rho + eta_4, written without the 1/rho.
  const double g_eta5 = 1.0 / (std::sqrt(w * one_m_rho2 * cc) * one_m_rho2);
  // c(k,2) = c_y q - (k-1) 2 D omega with omega = c_y eta_2 =
  // rho (sigma_X^2 C)^-1/2.
  const double root_vc = 1.0 / std::sqrt(v * cc);
  const double omega = rho * root_vc;
  for (int k = 0; k < 2; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    const double shift = k * 2.0 * d * one_m_rho2;  // (k-1) 2D(1 - rho^2)
    Vec7& a1 = c.c1_d[kk];
    Mat7& a2 = c.c1_dd[kk];
    c.c1[kk] = e * (p - shift) - g * q;
    a1[kMuX1] = -tau * e;
    a1[kMuX2] = -rest * e;
    a1[kMuY1] = tau * g;
    a1[kMuY2] = rest * g;
    a1[kSigmaX2] = -e * (p - shift) / (2.0 * v);
    a1[kSigmaY2] = g * q / (2.0 * w);
    a1[kRho] = e * eta4 * p - g_eta5 * q + k * 2.0 * d * rho * e;
    set_sym(a2, kMuX1, kSigmaX2, tau * e / (2.0 * v));
    set_sym(a2, kMuX1, kRho, -tau * e * eta4);
    set_sym(a2, kMuX2, kSigmaX2, rest * e / (2.0 * v));
    set_sym(a2, kMuX2, kRho, -rest * e * eta4);
    set_sym(a2, kMuY1, kSigmaY2, -tau * g / (2.0 * w));
    set_sym(a2, kMuY1, kRho, tau * g_eta5);
    set_sym(a2, kMuY2, kSigmaY2, -rest * g / (2.0 * w));
    set_sym(a2, kMuY2, kRho, rest * g_eta5);
    a2(kSigmaX2, kSigmaX2) = 3.0 * e * (p - shift) / (4.0 * v * v);
    set_sym(a2, kSigmaX2, kRho, -e * (eta4 * p / 2.0 + k * rho * d) / v);
    a2(kSigmaY2, kSigmaY2) = -3.0 * g * q / (4.0 * w * w);
    set_sym(a2, kSigmaY2, kRho, g_eta5 * q / (2.0 * w));
    a2(kRho, kRho) = e * (1.0 + 2.0 * rho * rho) * p / (one_m_rho2 * one_m_rho2) -
                     3.0 * g * q / (one_m_rho2 * one_m_rho2) +
                     k * 2.0 * d * e / one_m_rho2;

    Vec7& b1 = c.c2_d[kk];
    Mat7& b2 = c.c2_dd[kk];
    c.c2[kk] = c.cy * q - k * 2.0 * d * omega;
    b1[kMuY1] = -tau * c.cy;
    b1[kMuY2] = -rest * c.cy;
    b1[kSigmaX2] = k * d * omega / v;
    b1[kSigmaY2] = -c.cy * q / (2.0 * w);
    b1[kRho] = -k * 2.0 * d * root_vc;
    set_sym(b2, kMuY1, kSigmaY2, tau * c.cy / (2.0 * w));
    set_sym(b2, kMuY2, kSigmaY2, rest * c.cy / (2.0 * w));
    b2(kSigmaX2, kSigmaX2) = -k * 3.0 * d * omega / (2.0 * v * v);
    set_sym(b2, kSigmaX2, kRho, k * d * root_vc / v);
    b2(kSigmaY2, kSigmaY2) = 3.0 * c.cy * q / (4.0 * w * w);
  }
  return c;
}

double pcm_lambda(const PcmCoefficients& c, int r, int k, int j1, int j2) {
  check_index(r);
  const double kk = k - 1;
  const auto i = static_cast<Eigen::Index>(r);
  const auto ks = static_cast<std::size_t>(k - 1);
  if (j1 == 0 && j2 == 1) return c.cy_d[i] + c.cy * kk * c.beta_d[i];
  if (j1 == 1 && j2 == 1) return c.cy * c.c1_d[ks][i];
  if (j1 == 0 && j2 == 2) return c.cy * c.c2_d[ks][i];
  return 0.0;
}

double pcm_gamma(const PcmCoefficients& c, int r, int s, int k, int j1,
                 int j2) {
  check_index(r);
  check_index(s);
  const double kk = k - 1;
  const auto ks = static_cast<std::size_t>(k - 1);
  const auto i = static_cast<Eigen::Index>(r);
  const auto l = static_cast<Eigen::Index>(s);
  const Vec7& a1 = c.c1_d[ks];
  const Vec7& b1 = c.c2_d[ks];
  const double l01 = pcm_lambda(c, r, k, 0, 1);
  const double l11 = pcm_lambda(c, r, k, 1, 1);
  const double l02 = pcm_lambda(c, r, k, 0, 2);
  if (j1 == 0 && j2 == 1) {
    return kk * c.beta_d[l] * l01 + c.cy_dd(i, l) +
           kk * (c.cy_d[l] * c.beta_d[i] + c.cy * c.beta_dd(i, l));
  }
  if (j1 == 1 && j2 == 1) {
    return l01 * a1[l] + kk * c.beta_d[l] * l11 + c.cy_d[l] * a1[i] +
           c.cy * c.c1_dd[ks](i, l);
  }
  if (j1 == 0 && j2 == 2) {
    return l01 * b1[l] + kk * c.beta_d[l] * l02 + c.cy_d[l] * b1[i] +
           c.cy * c.c2_dd[ks](i, l);
  }
  if (j1 == 2 && j2 == 1) return l11 * a1[l];
  if (j1 == 1 && j2 == 2) return l11 * b1[l] + l02 * a1[l];
  if (j1 == 0 && j2 == 3) return l02 * b1[l];
  return 0.0;
}

PcmDerivatives pcm_derivatives(double y, const ThetaNatural& theta,
                               const StressPlan& plan) {
  const PcmCoefficients c = pcm_coefficients(y, theta, plan);
  const ProductTable t = products(c);
  PcmDerivatives out;
  out.value = c.cy * (t.v[0][0][0] - t.v[1][0][0]);
  for (int r = 0; r < 7; ++r) {
    out.g[r] = first_derivative(c, t, r);
    for (int s = r; s < 7; ++s) {
      const double h = negated_second_derivative(c, t, r, s);
      out.h(r, s) = h;
      out.h(s, r) = h;
    }
  }
  return out;
}

double pcm_gradient(double y, int r, const ThetaNatural& theta,
                    const StressPlan& plan) {
  const PcmCoefficients c = pcm_coefficients(y, theta, plan);
  return first_derivative(c, products(c), r);
}

double pcm_hessian(double y, int r, int s, const ThetaNatural& theta,
                   const StressPlan& plan) {
  const PcmCoefficients c = pcm_coefficients(y, theta, plan);
  return negated_second_derivative(c, products(c), r, s);
}

double alpha_term(int r, int s, const ThetaNatural& theta) {
  check_index(r);
  check_index(s);
  if (r != s) return 0.0;
  const double v = theta.sigma_x2;
  const double w = theta.sigma_y2;
  const double rho2 = theta.rho * theta.rho;
  switch (r) {
    case static_cast<int>(kSigmaX2):
      return -1.0 / (2.0 * v * v);
    case static_cast<int>(kSigmaY2):
      return -1.0 / (2.0 * w * w);
    case static_cast<int>(kRho):
      return -(1.0 + rho2) / ((1.0 - rho2) * (1.0 - rho2));
    default:
      return 0.0;
  }
}

Mat7 alpha_matrix(const ThetaNatural& theta) {
  Mat7 a = Mat7::Zero();
  for (int r = 0; r < 7; ++r) a(r, r) = alpha_term(r, r, theta);
  return a;
}

ZetaCoefficients zeta_coefficients(int piece, const ThetaNatural& theta,
                                   const StressPlan& plan) {
  require_two_levels(plan, theta);
  if (piece != 1 && piece != 2) throw DomainError("piece must be 1 or 2");
  const double d = plan.threshold;
  const double tau = plan.change_times[0];
  const double v = theta.sigma_x2;
  const double w = theta.sigma_y2;
  const double rho = theta.rho;
  const double one_m_rho2 = 1.0 - rho * rho;
  const double eta1 = theta.eta1();
  const double eta2 = theta.eta2();
  const double mu1 = theta.mu_x[0];
  const double mu2 = theta.mu_x[1];

  // P_j(t) = p0 + p1 t and the t-linear parts of dP_j, dq_j.
  Vec7 dp0 = Vec7::Zero(), dp1 = Vec7::Zero();
  Vec7 dq0 = Vec7::Zero(), dq1 = Vec7::Zero();
  double p0 = 0.0, p1 = 0.0, mu = 0.0;
  std::size_t mu_index = kMuX1;
  if (piece == 1) {
    p0 = d;
    p1 = -mu1;
    mu = mu1;
    dp1[kMuX1] = -1.0;
    dq1[kMuY1] = -1.0;
  } else {
    p0 = d - mu1 * tau + mu2 * tau;
    p1 = -mu2;
    mu = mu2;
    mu_index = kMuX2;
    dp0[kMuX1] = -tau;
    dp0[kMuX2] = tau;
    dp1[kMuX2] = -1.0;
    dq0[kMuY1] = -tau;
    dq0[kMuY2] = tau;
    dq1[kMuY2] = -1.0;
  }
  // Partials of eta_2 = rho sigma_Y / sigma_X.
  Vec7 eta2_d = Vec7::Zero();
  eta2_d[kSigmaX2] = -eta2 / (2.0 * v);
  eta2_d[kSigmaY2] = eta2 / (2.0 * w);
  eta2_d[kRho] = std::sqrt(w / v);
  // Partials of eta_1 = 1 / (2 sigma_Y^2 (1 - rho^2)).
  Mat7 eta1_dd = Mat7::Zero();
  const double eta1_rho = 2.0 * rho * eta1 / one_m_rho2;
  eta1_dd(kSigmaY2, kSigmaY2) = 2.0 * eta1 / (w * w);
  eta1_dd(kRho, kRho) =
      2.0 * eta1 * (1.0 + 3.0 * rho * rho) / (one_m_rho2 * one_m_rho2);
  set_sym(eta1_dd, kSigmaY2, kRho, -eta1_rho / w);

  // d(q - eta_2 P)/dtheta_r = u0 + u1 t.
  const Vec7 u0 = dq0 - eta2 * dp0 - p0 * eta2_d;
  const Vec7 u1 = dq1 - eta2 * dp1 - p1 * eta2_d;

  ZetaCoefficients z;
  z.k_minus1 = 2.0 * eta1 * u0 * u0.transpose();
  z.k0 = 2.0 * eta1 * (u0 * u1.transpose() + u1 * u0.transpose()) +
         eta1_dd / (2.0 * eta1);
  z.k1 = 2.0 * eta1 * u1 * u1.transpose();
  // (D - mu t)^2 / (2 sigma_X^2) part of Q_j.
  const auto mi = static_cast<Eigen::Index>(mu_index);
  z.k_minus1(kSigmaX2, kSigmaX2) += d * d / (v * v * v);
  z.k0(mi, kSigmaX2) += d / (v * v);
  z.k0(kSigmaX2, mi) += d / (v * v);
  z.k0(kSigmaX2, kSigmaX2) += -2.0 * d * mu / (v * v * v);
  z.k1(mi, mi) += 1.0 / v;
  z.k1(mi, kSigmaX2) += -mu / (v * v);
  z.k1(kSigmaX2, mi) += -mu / (v * v);
  z.k1(kSigmaX2, kSigmaX2) += mu * mu / (v * v * v);
  return z;
}

PieceMoments piece_moments(int piece, const ThetaNatural& theta,
                           const StressPlan& plan) {
  const auto j = static_cast<std::size_t>(piece);
  const double lo = plan.boundary(j - 1);
  const double hi = plan.boundary(j);
  const double mu = theta.mu_x[j - 1];
  quad::Options opt;
  opt.abs_tol = 1e-14;
  opt.rel_tol = 1e-11;
  const auto res = quad::integrate<Eigen::VectorXd>(
      [&](double t) {
        Eigen::VectorXd f(3);
        const double dens =
            t > 0.0 ? ig_pdf(t, mu, theta.sigma_x2, plan.threshold) : 0.0;
        f << dens, t > 0.0 ? dens / t : 0.0, dens * t;
        return f;
      },
      lo, hi, opt);
  PieceMoments m;
  m.mass = res.value[0];
  if (m.mass > 0.0) {
    m.mean_inverse = res.value[1] / m.mass;
    m.mean = res.value[2] / m.mass;
  }
  return m;
}

Mat7 zeta_matrix(int piece, const ThetaNatural& theta, const StressPlan& plan) {
  const ZetaCoefficients z = zeta_coefficients(piece, theta, plan);
  const PieceMoments m = piece_moments(piece, theta, plan);
  if (!(m.mass > 0.0)) return Mat7::Zero();
  return z.k_minus1 * m.mean_inverse + z.k0 + z.k1 * m.mean;
}

double zeta(int piece, int r, int s, const ThetaNatural& theta,
            const StressPlan& plan) {
  check_index(r);
  check_index(s);
  return zeta_matrix(piece, theta, plan)(r, s);
}

VarphiResult varphi_matrix(const ThetaNatural& theta, const StressPlan& plan) {
  require_two_levels(plan, theta);
  const double cc = plan.censor_time;
  const double tau = plan.change_times[0];
  const double mean_y = theta.mu_y[0] * tau + theta.mu_y[1] * (cc - tau);
  const double sd = std::sqrt(theta.sigma_y2 * cc);
  // Integrate the dimensionless theta_r theta_s phi(r, s) so one absolute
  // tolerance suits every entry.
  const std::vector<double> tv = theta.to_vector();
  Vec7 scale;
  for (int r = 0; r < 7; ++r) {
    scale[r] = r == static_cast<int>(kRho) ? 1.0 : std::abs(tv[static_cast<std::size_t>(r)]);
  }
  constexpr int kPairs = 28;
  quad::Options opt;
  opt.abs_tol = 1e-10;
  opt.rel_tol = 1e-8;
  const auto res = quad::integrate<Eigen::VectorXd>(
      [&](double y) {
        Eigen::VectorXd f = Eigen::VectorXd::Zero(kPairs + 1);
        const PcmDerivatives pd = pcm_derivatives(y, theta, plan);
        const bool usable = pd.value > 1e-300;
        int idx = 0;
        for (int r = 0; r < 7; ++r) {
          for (int s = r; s < 7; ++s, ++idx) {
            double v = pd.h(r, s);
            if (usable) v += pd.g[r] * pd.g[s] / pd.value;
            f[idx] = v * scale[r] * scale[s];
          }
        }
        f[kPairs] = pd.value;
        return f;
      },
      mean_y - 12.0 * sd, mean_y + 12.0 * sd, opt);
  VarphiResult out;
  int idx = 0;
  for (int r = 0; r < 7; ++r) {
    for (int s = r; s < 7; ++s, ++idx) {
      set_sym(out.varphi, static_cast<std::size_t>(r), static_cast<std::size_t>(s),
              res.value[idx] / (scale[r] * scale[s]));
    }
  }
  out.mass = res.value[kPairs];
  return out;
}

double varphi(int r, int s, const ThetaNatural& theta, const StressPlan& plan) {
  check_index(r);
  check_index(s);
  return varphi_matrix(theta, plan).varphi(r, s);
}

FisherBlocks fisher_blocks(const ThetaNatural& theta, const StressPlan& plan) {
  require_two_levels(plan, theta);
  FisherBlocks b;
  b.alpha = alpha_matrix(theta);
  b.zeta1 = zeta_matrix(1, theta, plan);
  b.zeta2 = zeta_matrix(2, theta, plan);
  const VarphiResult vr = varphi_matrix(theta, plan);
  b.varphi = vr.varphi;
  b.censored_mass = vr.mass;
  b.p1 = piece_probability(1, theta, plan);
  b.p2 = piece_probability(2, theta, plan);
  return b;
}

Mat7 expected_hessian_given_counts(int nu1, int nu2, int n,
                                   const FisherBlocks& b,
                                   FisherAssembly assembly) {
  if (nu1 < 0 || nu2 < 0 || nu1 + nu2 > n) {
    throw DomainError("failure counts must satisfy 0 <= nu1 + nu2 <= n");
  }
  const int censored = n - nu1 - nu2;
  if (assembly == FisherAssembly::kPrinted) {
    return (nu1 * b.p1 + nu2 * b.p2) * b.alpha + nu1 * b.zeta1 +
           nu2 * b.zeta2 + censored * b.varphi;
  }
  const Mat7 cens = b.censored_mass > 0.0 ? Mat7(b.varphi / b.censored_mass)
                                           : Mat7::Zero();
  return (nu1 + nu2) * b.alpha + nu1 * b.zeta1 + nu2 * b.zeta2 +
         censored * cens;
}

Mat7 expected_hessian_given_counts(int nu1, int nu2, int n,
                                   const ThetaNatural& theta,
                                   const StressPlan& plan,
                                   FisherAssembly assembly) {
  return expected_hessian_given_counts(nu1, nu2, n, fisher_blocks(theta, plan),
                                       assembly);
}

InfoMatrix fisher_matrix_multinomial(const ThetaNatural& theta,
                                     const StressPlan& plan, int n,
                                     FisherAssembly assembly) {
  if (n < 0) throw DomainError("sample size must be non-negative");
  const FisherBlocks b = fisher_blocks(theta, plan);
  const double pc = 1.0 - b.p1 - b.p2;
  auto log_pow = [](int k, double p) {
    return k == 0 ? 0.0 : k * std::log(p);
  };
  InfoMatrix info;
  info.n = n;
  info.tau = plan.change_times[0];
  for (int nu1 = 0; nu1 <= n; ++nu1) {
    for (int nu2 = 0; nu1 + nu2 <= n; ++nu2) {
      const int nc = n - nu1 - nu2;
      const double log_w = std::lgamma(n + 1.0) - std::lgamma(nu1 + 1.0) -
                           std::lgamma(nu2 + 1.0) - std::lgamma(nc + 1.0) +
                           log_pow(nu1, b.p1) + log_pow(nu2, b.p2) +
                           log_pow(nc, pc);
      const double weight = std::exp(log_w);
      if (weight == 0.0) continue;
      info.matrix += weight * expected_hessian_given_counts(nu1, nu2, n, b,
                                                            assembly);
    }
  }
  return info;
}

InfoMatrix fisher_matrix(const ThetaNatural& theta, const StressPlan& plan,
                         int n, FisherAssembly assembly) {
  if (n < 0) throw DomainError("sample size must be non-negative");
  const FisherBlocks b = fisher_blocks(theta, plan);
  const double pc = 1.0 - b.p1 - b.p2;
  InfoMatrix info;
  info.n = n;
  info.tau = plan.change_times[0];
  if (assembly == FisherAssembly::kPrinted) {
    info.matrix = n * (b.p1 * (b.p1 * b.alpha + b.zeta1) +
                       b.p2 * (b.p2 * b.alpha + b.zeta2) + pc * b.varphi);
  } else {
    const Mat7 cens = b.censored_mass > 0.0
                          ? Mat7(b.varphi / b.censored_mass)
                          : Mat7::Zero();
    info.matrix = n * (b.p1 * (b.alpha + b.zeta1) +
                       b.p2 * (b.alpha + b.zeta2) + pc * cens);
  }
  return info;
}

InfoMatrix numeric_fisher(const ThetaNatural& theta, const StressPlan& plan,
                          int n, int replicates, std::uint64_t seed,
                          unsigned threads) {
  require_two_levels(plan, theta);
  if (n <= 0 || replicates <= 0) {
    throw DomainError("numeric Fisher needs positive n and replicates");
  }
  const std::vector<double> base = theta.to_vector();
  Eigen::VectorXd x(7), h(7);
  for (int r = 0; r < 7; ++r) {
    x[r] = base[static_cast<std::size_t>(r)];
    h[r] = 1e-4 * std::max(std::abs(x[r]), r == static_cast<int>(kRho) ? 0.01 : 1e-12);
  }
  std::vector<Mat7> sums(static_cast<std::size_t>(replicates), Mat7::Zero());
  parallel_for(sums.size(), threads, [&](std::size_t rep) {
    const Dataset data = simulate_dataset(static_cast<std::size_t>(n), theta,
                                          plan, seed, rep);
    for (const auto& obs : data.observations) {
      const opt::Objective neg_log = [&](const Eigen::VectorXd& p) {
        const ThetaNatural th = ThetaNatural::from_vector(
            std::vector<double>(p.data(), p.data() + p.size()));
        return -observation_log_density(obs, th, plan);
      };
      sums[rep] += opt::fd_hessian(neg_log, x, h);
    }
  });
  Mat7 total = Mat7::Zero();
  for (const auto& s : sums) total += s;
  InfoMatrix info;
  info.n = n;
  info.tau = plan.change_times[0];
  info.matrix = total / static_cast<double>(replicates);
  info.matrix = 0.5 * (info.matrix + info.matrix.transpose()).eval();
  return info;
}

}  // namespace ssalt
