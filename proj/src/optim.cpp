#include "gradfit/optim.hpp"

#include <cmath>

#include <boost/math/tools/minima.hpp>

namespace gradfit {

BfgsResult minimize_bfgs(const ObjectiveWithGrad& objective, const Eigen::VectorXd& x0,
                         double grad_tol, int max_iter) {
  const int dim = static_cast<int>(x0.size());
  BfgsResult res;
  res.x = x0;
  res.grad.resize(dim);
  res.f = objective(res.x, res.grad);

  Eigen::MatrixXd h_inv = Eigen::MatrixXd::Identity(dim, dim);
  Eigen::VectorXd grad_new(dim);

  for (res.iterations = 0; res.iterations < max_iter; ++res.iterations) {
    if (res.grad.norm() <= grad_tol) {
      res.converged = true;
      return res;
    }

    Eigen::VectorXd direction = -(h_inv * res.grad);
    double slope = res.grad.dot(direction);
    if (slope >= 0.0) {  // stale curvature; restart from steepest descent
      h_inv.setIdentity();
      direction = -res.grad;
      slope = res.grad.dot(direction);
    }

    // Armijo backtracking
    constexpr double c1 = 1e-4;
    double step = 1.0;
    double f_new = 0.0;
    Eigen::VectorXd x_new;
    bool accepted = false;
    for (int bt = 0; bt < 50; ++bt) {
      x_new = res.x + step * direction;
      f_new = objective(x_new, grad_new);
      if (std::isfinite(f_new) && f_new <= res.f + c1 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // near the optimum the objective comparison drowns in rounding noise
      // while the gradient is still accurate; polish on the gradient norm
      step = 1.0;
      for (int bt = 0; bt < 20; ++bt) {
        x_new = res.x + step * direction;
        f_new = objective(x_new, grad_new);
        if (std::isfinite(f_new) && grad_new.norm() < res.grad.norm()) {
          accepted = true;
          break;
        }
        step *= 0.5;
      }
    }
    if (!accepted) return res;  // no progress possible at this scale

    const Eigen::VectorXd s = x_new - res.x;
    const Eigen::VectorXd y = grad_new - res.grad;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(dim, dim);
      const Eigen::MatrixXd v = identity - rho * s * y.transpose();
      h_inv = v * h_inv * v.transpose() + rho * s * s.transpose();
    }

    res.x = x_new;
    res.f = f_new;
    res.grad = grad_new;
  }
  res.converged = (res.grad.norm() <= grad_tol);
  return res;
}

ScalarMaxResult maximize_scalar(const std::function<double(double)>& f, double lo, double hi,
                                int n_grid) {
  if (n_grid < 3) n_grid = 3;
  const double span = hi - lo;
  double best_x = lo;
  double best_f = f(lo);
  for (int i = 1; i < n_grid; ++i) {
    const double x = lo + span * i / (n_grid - 1);
    const double fx = f(x);
    // first maximum wins at ties; the tolerance keeps rounding noise from
    // flipping between exactly likelihood-degenerate branches
    if (fx > best_f + 1e-12 * (std::abs(best_f) + 1e-30)) {
      best_f = fx;
      best_x = x;
    }
  }
  const double cell = span / (n_grid - 1);
  const double a = std::max(lo, best_x - cell);
  const double b = std::min(hi, best_x + cell);
  const auto neg = [&f](double x) { return -f(x); };
  const auto brent = boost::math::tools::brent_find_minima(neg, a, b, 40);
  ScalarMaxResult out{brent.first, -brent.second};
  if (best_f > out.f) out = {best_x, best_f};  // keep the grid point on a flat cell
  return out;
}

}  // namespace gradfit
