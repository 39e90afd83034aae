#include "ssalt/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace ssalt::opt {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double guarded(const Objective& f, const Eigen::VectorXd& x, int& evals) {
  ++evals;
  const double v = f(x);
  return std::isnan(v) ? kInf : v;
}
}  // namespace

Result nelder_mead(const Objective& f, const Eigen::VectorXd& x0,
                   const Eigen::VectorXd& steps, const Options& options) {
  const Eigen::Index n = x0.size();
  Result out;
  std::vector<Eigen::VectorXd> simplex(static_cast<std::size_t>(n + 1), x0);
  std::vector<double> values(static_cast<std::size_t>(n + 1));
  for (Eigen::Index i = 0; i < n; ++i) {
    simplex[static_cast<std::size_t>(i + 1)][i] += steps[i];
  }
  for (std::size_t i = 0; i < simplex.size(); ++i) {
    values[i] = guarded(f, simplex[i], out.evaluations);
  }
  std::vector<std::size_t> order(simplex.size());

  for (out.iterations = 0; out.iterations < options.max_iterations;
       ++out.iterations) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[order.size() - 2];

    double diameter = 0.0;
    for (std::size_t i = 0; i < simplex.size(); ++i) {
      diameter = std::max(
          diameter, (simplex[i] - simplex[best]).lpNorm<Eigen::Infinity>());
    }
    const double spread = values[worst] - values[best];
    if (std::isfinite(values[best]) && std::isfinite(values[worst]) &&
        spread <= options.f_rel_tol * (std::abs(values[best]) + 1e-300) &&
        diameter <= options.x_tol * std::max(1.0, simplex[best].lpNorm<Eigen::Infinity>())) {
      out.converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 0; i < simplex.size(); ++i) {
      if (i != worst) centroid += simplex[i];
    }
    centroid /= static_cast<double>(n);

    const Eigen::VectorXd reflected = centroid + (centroid - simplex[worst]);
    const double f_reflected = guarded(f, reflected, out.evaluations);
    if (f_reflected < values[best]) {
      const Eigen::VectorXd expanded =
          centroid + 2.0 * (centroid - simplex[worst]);
      const double f_expanded = guarded(f, expanded, out.evaluations);
      if (f_expanded < f_reflected) {
        simplex[worst] = expanded;
        values[worst] = f_expanded;
      } else {
        simplex[worst] = reflected;
        values[worst] = f_reflected;
      }
      continue;
    }
    if (f_reflected < values[second]) {
      simplex[worst] = reflected;
      values[worst] = f_reflected;
      continue;
    }
    const bool outside = f_reflected < values[worst];
    const Eigen::VectorXd contracted =
        outside ? Eigen::VectorXd(centroid + 0.5 * (reflected - centroid))
                : Eigen::VectorXd(centroid + 0.5 * (simplex[worst] - centroid));
    const double f_contracted = guarded(f, contracted, out.evaluations);
    if (f_contracted < std::min(f_reflected, values[worst])) {
      simplex[worst] = contracted;
      values[worst] = f_contracted;
      continue;
    }
    for (std::size_t i = 0; i < simplex.size(); ++i) {
      if (i == best) continue;
      simplex[i] = simplex[best] + 0.5 * (simplex[i] - simplex[best]);
      values[i] = guarded(f, simplex[i], out.evaluations);
    }
  }
  const auto best_it = std::min_element(values.begin(), values.end());
  const auto best = static_cast<std::size_t>(best_it - values.begin());
  out.x = simplex[best];
  out.f = values[best];
  return out;
}

Eigen::VectorXd fd_steps(const Eigen::VectorXd& x, double scale,
                         double floor) {
  Eigen::VectorXd h(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    h[i] = scale * std::max(std::abs(x[i]), floor);
  }
  return h;
}

Eigen::VectorXd fd_gradient(const Objective& f, const Eigen::VectorXd& x,
                            const Eigen::VectorXd& h) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    xp[i] = x[i] + h[i];
    const double fp = f(xp);
    xp[i] = x[i] - h[i];
    const double fm = f(xp);
    xp[i] = x[i];
    g[i] = (fp - fm) / (2.0 * h[i]);
  }
  return g;
}

Eigen::MatrixXd fd_hessian(const Objective& f, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& h) {
  const Eigen::Index n = x.size();
  Eigen::MatrixXd hess(n, n);
  const double f0 = f(x);
  Eigen::VectorXd e = x;
  for (Eigen::Index i = 0; i < n; ++i) {
    e[i] = x[i] + h[i];
    const double fp = f(e);
    e[i] = x[i] - h[i];
    const double fm = f(e);
    e[i] = x[i];
    hess(i, i) = (fp - 2.0 * f0 + fm) / (h[i] * h[i]);
    for (Eigen::Index k = i + 1; k < n; ++k) {
      auto at = [&](double si, double sk) {
        e[i] = x[i] + si * h[i];
        e[k] = x[k] + sk * h[k];
        const double v = f(e);
        e[i] = x[i];
        e[k] = x[k];
        return v;
      };
      const double v = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) /
                       (4.0 * h[i] * h[k]);
      hess(i, k) = v;
      hess(k, i) = v;
    }
  }
  return hess;
}

Result bfgs(const Objective& f, const Eigen::VectorXd& x0,
            const Options& options) {
  const Eigen::Index n = x0.size();
  Result out;
  out.x = x0;
  out.f = guarded(f, x0, out.evaluations);
  if (!std::isfinite(out.f)) return out;
  auto gradient = [&](const Eigen::VectorXd& x) {
    out.evaluations += static_cast<int>(2 * n);
    return fd_gradient(f, x, fd_steps(x, 1e-6, 1.0));
  };
  Eigen::VectorXd g = gradient(out.x);
  Eigen::MatrixXd hinv = Eigen::MatrixXd::Identity(n, n);
  bool just_reset = true;

  for (out.iterations = 0; out.iterations < options.max_iterations;
       ++out.iterations) {
    if (!g.allFinite()) break;
    if (g.lpNorm<Eigen::Infinity>() <= options.g_tol) {
      out.converged = true;
      break;
    }
    Eigen::VectorXd dir = -hinv * g;
    double slope = g.dot(dir);
    if (!(slope < 0.0)) {
      hinv.setIdentity();
      dir = -g;
      slope = -g.squaredNorm();
      just_reset = true;
    }
    double step = 1.0;
    double f_new = kInf;
    Eigen::VectorXd x_new;
    bool accepted = false;
    for (int k = 0; k < 60; ++k) {
      x_new = out.x + step * dir;
      f_new = guarded(f, x_new, out.evaluations);
      if (f_new <= out.f + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (just_reset) {
        // Steepest descent cannot improve: stationary up to FD noise.
        out.converged = g.lpNorm<Eigen::Infinity>() <= 1e3 * options.g_tol;
        break;
      }
      hinv.setIdentity();
      just_reset = true;
      continue;
    }
    just_reset = false;
    const Eigen::VectorXd s = x_new - out.x;
    const Eigen::VectorXd g_new = gradient(x_new);
    const Eigen::VectorXd yv = g_new - g;
    const double f_change = out.f - f_new;
    out.x = x_new;
    out.f = f_new;
    g = g_new;
    const double sy = s.dot(yv);
    if (sy > 1e-12 * s.norm() * yv.norm()) {
      if (out.iterations == 0) hinv *= sy / yv.squaredNorm();
      const double r = 1.0 / sy;
      const Eigen::MatrixXd left =
          Eigen::MatrixXd::Identity(n, n) - r * s * yv.transpose();
      hinv = left * hinv * left.transpose() + r * s * s.transpose();
    }
    if (f_change <= options.f_rel_tol * (std::abs(out.f) + 1e-300) &&
        s.lpNorm<Eigen::Infinity>() <= options.x_tol * std::max(1.0, out.x.lpNorm<Eigen::Infinity>())) {
      out.converged = true;
      break;
    }
  }
  return out;
}

}  // namespace ssalt::opt
