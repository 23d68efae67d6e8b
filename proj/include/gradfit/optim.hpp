#pragma once

#include <functional>

#include <Eigen/Dense>

namespace gradfit {

/// f(x, grad) evaluates the objective and writes its gradient.
using ObjectiveWithGrad = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>;

struct BfgsResult {
  Eigen::VectorXd x;
  double f = 0.0;
  Eigen::VectorXd grad;
  int iterations = 0;
  bool converged = false;
};

/// Dense BFGS minimization with Armijo backtracking. Stops when
/// ||grad|| <= grad_tol or after max_iter iterations.
BfgsResult minimize_bfgs(const ObjectiveWithGrad& objective, const Eigen::VectorXd& x0,
                         double grad_tol, int max_iter = 500);

struct ScalarMaxResult {
  double x = 0.0;
  double f = 0.0;
};

/// Deterministic scan over n_grid equally spaced points of [lo, hi] followed
/// by Brent refinement around the first grid maximum.
ScalarMaxResult maximize_scalar(const std::function<double(double)>& f, double lo, double hi,
                                int n_grid = 65);

}  // namespace gradfit
