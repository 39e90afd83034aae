#pragma once

#include <array>
#include <cstddef>
#include <variant>
#include <vector>

namespace ssalt {

/// Celsius-to-Kelvin offset used by the Arrhenius link (273, not 273.15).
inline constexpr double kKelvinOffset = 273.0;

/// Step-stress test plan: m stress levels S_1 < ... < S_m applied on
/// [0, tau_1), [tau_1, tau_2), ..., [tau_{m-1}, C], use level S_0 < S_1,
/// failure threshold D for the latent degradation process.
struct StressPlan {
  std::vector<double> stresses;      // S_1..S_m, degrees C
  double use_stress = 0.0;           // S_0, degrees C
  std::vector<double> change_times;  // tau_1..tau_{m-1}
  double censor_time = 0.0;          // C
  double threshold = 1.0;            // D

  std::size_t levels() const { return stresses.size(); }

  /// tau_j with tau_0 = 0 and tau_m = C, j = 0..m.
  double boundary(std::size_t j) const;

  /// Throws DomainError unless the ordering invariants hold.
  void validate() const;

  /// Convenience constructor for the common two-level plan.
  static StressPlan two_level(double s0, double s1, double s2, double tau,
                              double censor, double threshold = 1.0);
};

/// theta* = (a, b, c, d, sigma_X^2, sigma_Y^2, rho): Arrhenius coefficients
/// for the degradation (a, b) and marker (c, d) drifts.
struct ThetaLink {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  double sigma_x2 = 1.0;
  double sigma_y2 = 1.0;
  double rho = 0.0;

  void validate() const;
  std::array<double, 7> to_array() const {
    return {a, b, c, d, sigma_x2, sigma_y2, rho};
  }
  static ThetaLink from_array(const std::array<double, 7>& v) {
    return {v[0], v[1], v[2], v[3], v[4], v[5], v[6]};
  }
};

/// theta = (mu_X1..mu_Xm, mu_Y1..mu_Ym, sigma_X^2, sigma_Y^2, rho).
struct ThetaNatural {
  std::vector<double> mu_x;
  std::vector<double> mu_y;
  double sigma_x2 = 1.0;
  double sigma_y2 = 1.0;
  double rho = 0.0;

  std::size_t levels() const { return mu_x.size(); }
  void validate() const;

  double sigma_x() const;
  double sigma_y() const;
  /// eta_1 = 1 / (2 sigma_Y^2 (1 - rho^2)).
  double eta1() const;
  /// eta_2 = rho sigma_Y / sigma_X, the marker shift per unit of unspent
  /// degradation.
  double eta2() const;
  /// eta_3 = 1 / (sigma_X sqrt((1 - rho^2) C)).
  double eta3(double censor_time) const;
  /// eta_4 = rho / (1 - rho^2).
  double eta4() const;
  /// eta_5 = 1/rho + eta_4.
  double eta5() const;
  /// eta_6 = 1/rho + 2 eta_4.
  double eta6() const;

  /// Flattened in the canonical order (m = 2: mu_X1, mu_X2, mu_Y1, mu_Y2,
  /// sigma_X^2, sigma_Y^2, rho).
  std::vector<double> to_vector() const;
  static ThetaNatural from_vector(const std::vector<double>& v);
};

/// Canonical 0-based indices of the m = 2 natural parameter vector.
namespace param {
inline constexpr std::size_t kMuX1 = 0;
inline constexpr std::size_t kMuX2 = 1;
inline constexpr std::size_t kMuY1 = 2;
inline constexpr std::size_t kMuY2 = 3;
inline constexpr std::size_t kSigmaX2 = 4;
inline constexpr std::size_t kSigmaY2 = 5;
inline constexpr std::size_t kRho = 6;
inline constexpr std::size_t kCount = 7;
}  // namespace param

/// An item that failed at `time` inside piece `piece` (1-based) with the
/// marker reading `marker`.
struct FailedObs {
  int piece = 1;
  double time = 0.0;
  double marker = 0.0;
};

/// An item that survived to C; the marker is read at C.
struct CensoredObs {
  double marker = 0.0;
};

using Observation = std::variant<FailedObs, CensoredObs>;

struct Dataset {
  StressPlan plan;
  std::vector<Observation> observations;

  std::size_t size() const { return observations.size(); }
  std::size_t censored_count() const;
  /// Throws DomainError when an observation is inconsistent with the plan.
  void validate() const;
};

/// Piece index (1-based) of time t under the observation convention:
/// pieces are (tau_{j-1}, tau_j], with t = C in piece m.
int piece_of(double t, const StressPlan& plan);

/// Wire code for an observation: piece index for failures, m + 1 for
/// censored items.
int delta_code(const Observation& obs, std::size_t levels);
double observed_time(const Observation& obs, const StressPlan& plan);
double observed_marker(const Observation& obs);

}  // namespace ssalt
