#pragma once

#include <Eigen/Core>
#include <functional>

namespace ssalt::opt {

/// Objective to minimize. Infeasible points return +infinity.
using Objective = std::function<double(const Eigen::VectorXd&)>;

struct Options {
  int max_iterations = 2000;
  double f_rel_tol = 1e-10;  // relative spread of simplex values / f change
  double x_tol = 1e-8;       // simplex diameter / step norm
  double g_tol = 1e-6;       // gradient sup-norm (quasi-Newton only)
};

struct Result {
  Eigen::VectorXd x;
  double f = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

/// Nelder-Mead downhill simplex with the standard coefficients (reflection
/// 1, expansion 2, contraction 1/2, shrink 1/2). The initial simplex is x0
/// plus steps[i] along each axis.
Result nelder_mead(const Objective& f, const Eigen::VectorXd& x0,
                   const Eigen::VectorXd& steps, const Options& options = {});

/// BFGS with central-difference gradients and Armijo backtracking; the
/// inverse-Hessian estimate is reset to the identity when a search fails.
Result bfgs(const Objective& f, const Eigen::VectorXd& x0,
            const Options& options = {});

/// Central-difference gradient with per-coordinate step h_i.
Eigen::VectorXd fd_gradient(const Objective& f, const Eigen::VectorXd& x,
                            const Eigen::VectorXd& h);
/// Central-difference Hessian with per-coordinate step h_i.
Eigen::MatrixXd fd_hessian(const Objective& f, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& h);
/// Default steps h_i = scale * max(|x_i|, floor).
Eigen::VectorXd fd_steps(const Eigen::VectorXd& x, double scale,
                         double floor);

}  // namespace ssalt::opt
