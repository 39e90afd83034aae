#include "ssalt/types.hpp"

#include <cmath>
#include <sstream>

#include "ssalt/error.hpp"

namespace ssalt {

double StressPlan::boundary(std::size_t j) const {
  if (j == 0) return 0.0;
  if (j >= levels()) return censor_time;
  return change_times[j - 1];
}

void StressPlan::validate() const {
  const std::size_t m = levels();
  if (m == 0) throw DomainError("plan needs at least one stress level");
  if (change_times.size() + 1 != m) {
    throw DomainError("plan needs exactly m - 1 stress changing times");
  }
  if (!(use_stress < stresses.front())) {
    throw DomainError("use stress S_0 must be below S_1");
  }
  for (std::size_t j = 1; j < m; ++j) {
    if (!(stresses[j - 1] < stresses[j])) {
      throw DomainError("stress levels must be strictly increasing");
    }
  }
  if (!(censor_time > 0.0) || !std::isfinite(censor_time)) {
    throw DomainError("censor time C must be positive");
  }
  double prev = 0.0;
  for (double tau : change_times) {
    if (!(tau > prev) || !(tau < censor_time)) {
      throw DomainError("stress changing times must increase inside (0, C)");
    }
    prev = tau;
  }
  if (!(threshold > 0.0) || !std::isfinite(threshold)) {
    throw DomainError("threshold D must be positive");
  }
  for (double s : stresses) {
    if (!(s + kKelvinOffset > 0.0)) {
      throw DomainError("stress below absolute zero");
    }
  }
}

StressPlan StressPlan::two_level(double s0, double s1, double s2, double tau,
                                 double censor, double threshold) {
  StressPlan plan;
  plan.stresses = {s1, s2};
  plan.use_stress = s0;
  plan.change_times = {tau};
  plan.censor_time = censor;
  plan.threshold = threshold;
  return plan;
}

void ThetaLink::validate() const {
  for (double v : to_array()) {
    if (!std::isfinite(v)) throw DomainError("non-finite link parameter");
  }
  if (!(sigma_x2 > 0.0)) throw DomainError("sigma_X^2 must be positive");
  if (!(sigma_y2 > 0.0)) throw DomainError("sigma_Y^2 must be positive");
  if (!(std::abs(rho) < 1.0)) throw DomainError("|rho| must be below 1");
}

void ThetaNatural::validate() const {
  if (mu_x.empty() || mu_x.size() != mu_y.size()) {
    throw DomainError("drift vectors must be non-empty and of equal length");
  }
  for (double mu : mu_x) {
    if (!(mu > 0.0) || !std::isfinite(mu)) {
      throw DomainError("degradation drifts mu_Xj must be positive");
    }
  }
  for (double mu : mu_y) {
    if (!std::isfinite(mu)) throw DomainError("non-finite marker drift");
  }
  if (!(sigma_x2 > 0.0) || !std::isfinite(sigma_x2)) {
    throw DomainError("sigma_X^2 must be positive");
  }
  if (!(sigma_y2 > 0.0) || !std::isfinite(sigma_y2)) {
    throw DomainError("sigma_Y^2 must be positive");
  }
  if (!(std::abs(rho) < 1.0)) throw DomainError("|rho| must be below 1");
}

double ThetaNatural::sigma_x() const { return std::sqrt(sigma_x2); }
double ThetaNatural::sigma_y() const { return std::sqrt(sigma_y2); }
double ThetaNatural::eta1() const {
  return 0.5 / (sigma_y2 * (1.0 - rho * rho));
}
double ThetaNatural::eta2() const { return rho * std::sqrt(sigma_y2 / sigma_x2); }
double ThetaNatural::eta3(double censor_time) const {
  return 1.0 / std::sqrt(sigma_x2 * (1.0 - rho * rho) * censor_time);
}
double ThetaNatural::eta4() const { return rho / (1.0 - rho * rho); }
double ThetaNatural::eta5() const { return 1.0 / rho + eta4(); }
double ThetaNatural::eta6() const { return 1.0 / rho + 2.0 * eta4(); }

std::vector<double> ThetaNatural::to_vector() const {
  std::vector<double> v;
  v.reserve(2 * mu_x.size() + 3);
  v.insert(v.end(), mu_x.begin(), mu_x.end());
  v.insert(v.end(), mu_y.begin(), mu_y.end());
  v.push_back(sigma_x2);
  v.push_back(sigma_y2);
  v.push_back(rho);
  return v;
}

ThetaNatural ThetaNatural::from_vector(const std::vector<double>& v) {
  if (v.size() < 5 || (v.size() - 3) % 2 != 0) {
    throw DomainError("natural parameter vector must have length 2m + 3");
  }
  const std::size_t m = (v.size() - 3) / 2;
  ThetaNatural theta;
  theta.mu_x.assign(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(m));
  theta.mu_y.assign(v.begin() + static_cast<std::ptrdiff_t>(m),
                    v.begin() + static_cast<std::ptrdiff_t>(2 * m));
  theta.sigma_x2 = v[2 * m];
  theta.sigma_y2 = v[2 * m + 1];
  theta.rho = v[2 * m + 2];
  return theta;
}

std::size_t Dataset::censored_count() const {
  std::size_t k = 0;
  for (const auto& obs : observations) {
    if (std::holds_alternative<CensoredObs>(obs)) ++k;
  }
  return k;
}

void Dataset::validate() const {
  plan.validate();
  const int m = static_cast<int>(plan.levels());
  for (std::size_t i = 0; i < observations.size(); ++i) {
    const auto* f = std::get_if<FailedObs>(&observations[i]);
    const double y = observed_marker(observations[i]);
    if (!std::isfinite(y)) {
      std::ostringstream os;
      os << "observation " << i << ": non-finite marker";
      throw DomainError(os.str());
    }
    if (f == nullptr) continue;
    if (f->piece < 1 || f->piece > m) {
      std::ostringstream os;
      os << "observation " << i << ": piece index " << f->piece
         << " outside 1.." << m;
      throw DomainError(os.str());
    }
    const double lo = plan.boundary(static_cast<std::size_t>(f->piece) - 1);
    const double hi = plan.boundary(static_cast<std::size_t>(f->piece));
    if (!(f->time > lo) || !(f->time <= hi)) {
      std::ostringstream os;
      os << "observation " << i << ": failure time " << f->time
         << " outside piece " << f->piece << " interval (" << lo << ", " << hi
         << "]";
      throw DomainError(os.str());
    }
  }
}

int piece_of(double t, const StressPlan& plan) {
  const std::size_t m = plan.levels();
  for (std::size_t j = 1; j < m; ++j) {
    if (t <= plan.change_times[j - 1]) return static_cast<int>(j);
  }
  return static_cast<int>(m);
}

int delta_code(const Observation& obs, std::size_t levels) {
  if (const auto* f = std::get_if<FailedObs>(&obs)) return f->piece;
  return static_cast<int>(levels) + 1;
}

double observed_time(const Observation& obs, const StressPlan& plan) {
  if (const auto* f = std::get_if<FailedObs>(&obs)) return f->time;
  return plan.censor_time;
}

double observed_marker(const Observation& obs) {
  return std::visit([](const auto& o) { return o.marker; }, obs);
}

}  // namespace ssalt
