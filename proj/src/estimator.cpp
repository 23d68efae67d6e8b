#include "gradfit/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "gradfit/optim.hpp"

namespace gradfit {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLogFloor = 1e-300;

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Log-likelihood of cascade-basis weights as a function of B_2..B_N, with
/// the analytic gradient. Zero-weight outcomes contribute nothing (0 ln p = 0).
class CascadeLikelihood {
 public:
  CascadeLikelihood(const std::vector<double>& weights, int n, double gamma_time)
      : weights_(weights), n_(n), two_gt_(2.0 * gamma_time) {
    rows_ = cascade_basis(n).rows.real();  // cascade rows are real
  }

  double value_and_grad(const Eigen::VectorXd& theta, Eigen::VectorXd& grad) const {
    Eigen::VectorXcd amps(n_);
    const double norm = 1.0 / std::sqrt(double(n_));
    amps[0] = Complex(norm, 0.0);
    for (int j = 1; j < n_; ++j) amps[j] = std::polar(norm, -two_gt_ * theta[j - 1]);

    const Eigen::VectorXcd overlaps = rows_.cast<Complex>() * amps;
    grad.setZero(n_ - 1);
    double ll = 0.0;
    for (int xi = 0; xi < n_; ++xi) {
      if (weights_[xi] == 0.0) continue;
      const double p = std::max(std::norm(overlaps[xi]), kLogFloor);
      ll += weights_[xi] * std::log(p);
      // dp/dB_m = 2 Re[conj(A_xi) * rows(xi,m) * (-2i gt) * amps_m]
      const Complex a_conj = std::conj(overlaps[xi]);
      const double w_over_p = weights_[xi] / p;
      for (int m = 1; m < n_; ++m) {
        const Complex d_amp = Complex(0.0, -two_gt_) * amps[m];
        const double dp = 2.0 * std::real(a_conj * rows_(xi, m) * d_amp);
        grad[m - 1] += w_over_p * dp;
      }
    }
    return ll;
  }

 private:
  std::vector<double> weights_;
  int n_;
  double two_gt_;
  Eigen::MatrixXd rows_;
};

/// Sequential inversion of the cascade probabilities. Outcome k pins the
/// phase phi_{k+1} = 2 gt B_{k+1} onto a circle around the running mean
/// phasor; the two intersection points are likelihood-degenerate, so the
/// branch is always taken in the direction of `sign` (the configured prior).
Eigen::VectorXd sequential_inversion(const std::vector<double>& weights, int n, double sign) {
  double total = 0.0;
  for (double w : weights) total += w;
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(n);
  Complex sum_phasor(1.0, 0.0);  // sum over assigned e^{-i phi_j}, phi_1 = 0
  for (int k = 1; k < n; ++k) {
    const Complex mean = sum_phasor / double(k);
    const double phat = (total > 0.0) ? weights[k] / total : 0.0;
    const double r2 = double(n) * (k + 1.0) / k * phat;
    const double mod = std::abs(mean);
    double next = 0.0;
    if (mod > 1e-15) {
      const double cos_d = std::clamp((1.0 + mod * mod - r2) / (2.0 * mod), -1.0, 1.0);
      next = -std::arg(mean) + sign * std::acos(cos_d);
    }
    phi[k] = next;
    sum_phasor += std::polar(1.0, -next);
  }
  return phi;
}

GradientEstimate finish_linear_estimate(double g_hat, int n, double spacing,
                                        double log_likelihood, bool converged) {
  GradientEstimate est;
  est.g_hat = g_hat;
  est.intercept = 0.0;
  est.field_estimates.resize(n);
  for (int j = 0; j < n; ++j) est.field_estimates[j] = g_hat * j * spacing;
  est.log_likelihood = log_likelihood;
  est.converged = converged;
  est.branch = +1;
  return est;
}

std::vector<double> counts_to_weights(const OutcomeCounts& counts) {
  detail::require(!counts.counts.empty(), "empty counts");
  std::int64_t sum = 0;
  for (std::int64_t c : counts.counts) {
    detail::require(c >= 0, "counts must be nonnegative");
    sum += c;
  }
  detail::require(sum == counts.total, "counts do not sum to total");
  return counts.as_weights();
}

double total_weight(const std::vector<double>& weights) {
  double total = 0.0;
  for (double w : weights) {
    detail::require(w >= 0.0 && std::isfinite(w), "weights must be nonnegative");
    total += w;
  }
  detail::require(total > 0.0, "all-zero weights");
  return total;
}

}  // namespace

std::vector<double> OutcomeCounts::as_weights() const {
  std::vector<double> w(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) w[i] = static_cast<double>(counts[i]);
  return w;
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial_index) {
  return splitmix64(master_seed ^ splitmix64(trial_index + 1));
}

OutcomeCounts sample_counts(const OutcomeDistribution& dist, std::int64_t shots,
                            std::uint64_t seed) {
  detail::require(shots >= 1, "shots must be >= 1");
  const int n = dist.size();
  detail::require(n >= 1, "empty distribution");
  double psum = 0.0;
  for (int i = 0; i < n; ++i) {
    detail::require(dist.probs[i] >= -1e-12, "negative probability");
    psum += dist.probs[i];
  }
  detail::require(std::abs(psum - 1.0) <= 1e-9, "distribution does not sum to 1");

  std::mt19937_64 rng(seed);
  OutcomeCounts out;
  out.counts.assign(n, 0);
  out.total = shots;
  std::int64_t remaining = shots;
  double remaining_p = 1.0;
  for (int i = 0; i + 1 < n && remaining > 0; ++i) {
    const double p = std::clamp(dist.probs[i] / remaining_p, 0.0, 1.0);
    std::binomial_distribution<std::int64_t> binom(remaining, p);
    const std::int64_t c = binom(rng);
    out.counts[i] = c;
    remaining -= c;
    remaining_p = std::max(remaining_p - dist.probs[i], 0.0);
  }
  out.counts[n - 1] += remaining;
  return out;
}

std::vector<double> lslf_coefficients(const ChainGeometry& geometry) {
  const int n = geometry.n_atoms;
  const double a = geometry.spacing;
  std::vector<double> c(n);
  const double denom = a * (n - 1.0) * n * (n + 1.0);
  for (int i = 1; i <= n; ++i) c[i - 1] = 6.0 * (2.0 * i - n - 1.0) / denom;
  return c;
}

LinearFit lslf_fit(const ChainGeometry& geometry, const std::vector<double>& field_estimates) {
  const int n = geometry.n_atoms;
  detail::require(static_cast<int>(field_estimates.size()) == n,
                  "field estimates length does not match geometry");
  const std::vector<double> c = lslf_coefficients(geometry);
  double gradient = 0.0, mean_b = 0.0, mean_x = 0.0;
  for (int i = 0; i < n; ++i) {
    gradient += c[i] * field_estimates[i];
    mean_b += field_estimates[i] / n;
    mean_x += geometry.position(i + 1) / n;
  }
  return {gradient, mean_b - gradient * mean_x};
}

double crb_gradient(int n, const ProbeParams& params, double spacing, std::int64_t shots) {
  detail::require(n >= 2, "crb_gradient needs n >= 2");
  detail::require(shots >= 1, "shots must be >= 1");
  const double gta = params.gamma * params.time * spacing;
  return std::sqrt(3.0 / (double(shots) * (double(n) * n - 1.0))) / (2.0 * gta);
}

GradientEstimate mle_fields_cascade_weighted(const std::vector<double>& weights,
                                             const ChainGeometry& geometry,
                                             const ProbeParams& params, double prior_sign) {
  const int n = geometry.n_atoms;
  detail::require(static_cast<int>(weights.size()) == n,
                  "weights length does not match geometry");
  detail::require(prior_sign != 0.0, "prior sign must be nonzero");
  const double sign = (prior_sign > 0.0) ? +1.0 : -1.0;
  const double total = total_weight(weights);
  const double gt = params.gamma * params.time;

  GradientEstimate est;
  est.field_estimates.assign(n, 0.0);

  // all mass on outcome 0: likelihood is maximized by the zero field
  bool only_zero = true;
  for (int xi = 1; xi < n; ++xi) {
    if (weights[xi] > 0.0) {
      only_zero = false;
      break;
    }
  }
  if (only_zero) {
    est.converged = true;
    est.log_likelihood = 0.0;
    return est;
  }

  const CascadeLikelihood likelihood(weights, n, gt);
  const Eigen::VectorXd phi0 = sequential_inversion(weights, n, sign);
  Eigen::VectorXd theta0(n - 1);
  for (int k = 1; k < n; ++k) theta0[k - 1] = phi0[k] / (2.0 * gt);

  const auto objective = [&likelihood](const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
    const double ll = likelihood.value_and_grad(x, grad);
    grad = -grad;
    return -ll;
  };
  // quasi-Newton ascent targeting 1e-10 * nu stationarity
  const double grad_tol = 1e-10 * std::max(total, 1.0);
  const BfgsResult opt = minimize_bfgs(objective, theta0, grad_tol, 500);

  // Newton polish on the stationarity system. Zero-count outcomes leave
  // near-flat directions where BFGS progress drowns in the log-likelihood's
  // rounding noise; the gradient itself stays accurate, so a few damped
  // Newton steps with a finite-difference Hessian reach the contract.
  Eigen::VectorXd theta = opt.x;
  Eigen::VectorXd grad(n - 1);
  double ll = likelihood.value_and_grad(theta, grad);
  const double fd_step = 1e-6;
  for (int iter = 0; iter < 8 && grad.norm() > grad_tol; ++iter) {
    Eigen::MatrixXd hess(n - 1, n - 1);
    Eigen::VectorXd gp(n - 1), gm(n - 1);
    for (int j = 0; j < n - 1; ++j) {
      Eigen::VectorXd tp = theta, tm = theta;
      tp[j] += fd_step;
      tm[j] -= fd_step;
      likelihood.value_and_grad(tp, gp);
      likelihood.value_and_grad(tm, gm);
      hess.col(j) = (gp - gm) / (2.0 * fd_step);
    }
    hess = 0.5 * (hess + hess.transpose()).eval();
    const Eigen::VectorXd direction = hess.fullPivLu().solve(-grad);
    if (!direction.allFinite()) break;
    double step = 1.0;
    bool improved = false;
    for (int bt = 0; bt < 12; ++bt) {
      Eigen::VectorXd g_try(n - 1);
      const double ll_try = likelihood.value_and_grad(theta + step * direction, g_try);
      if (std::isfinite(ll_try) && g_try.allFinite() && g_try.norm() < grad.norm()) {
        theta += step * direction;
        grad = g_try;
        ll = ll_try;
        improved = true;
        break;
      }
      step *= 0.5;
    }
    if (!improved) break;
  }

  for (int k = 1; k < n; ++k) est.field_estimates[k] = theta[k - 1];
  est.log_likelihood = ll;
  est.converged = grad.norm() <= 1e-8 * std::max(total, 1.0);

  LinearFit fit = lslf_fit(geometry, est.field_estimates);
  if (sign * fit.gradient < 0.0) {
    // negating every field value leaves the distribution invariant; flip the
    // twin to honor the prior
    for (double& b : est.field_estimates) b = -b;
    fit = lslf_fit(geometry, est.field_estimates);
    est.branch = -1;
  }
  est.g_hat = fit.gradient;
  est.intercept = fit.intercept;
  return est;
}

GradientEstimate mle_fields_cascade(const OutcomeCounts& counts, const ChainGeometry& geometry,
                                    const ProbeParams& params, double prior_sign) {
  return mle_fields_cascade_weighted(counts_to_weights(counts), geometry, params, prior_sign);
}

double single_a_peak_location(int modal_outcome, int n, const ProbeParams& params,
                              double spacing) {
  const double gta = params.gamma * params.time * spacing;
  return (1.0 - double(modal_outcome) / n) * kPi / gta;
}

GradientEstimate estimate_gradient_single_a_weighted(const std::vector<double>& weights, int n,
                                                     const ProbeParams& params,
                                                     double spacing) {
  detail::require(static_cast<int>(weights.size()) == n, "weights length does not match n");
  total_weight(weights);
  const double gta = params.gamma * params.time * spacing;
  detail::require(gta > 0.0, "gamma*t*a must be positive for the branch window");

  const auto ll = [&](double g) {
    const OutcomeDistribution p = prob_a_linear(n, params, spacing, g);
    double sum = 0.0;
    for (int xi = 0; xi < n; ++xi) {
      if (weights[xi] == 0.0) continue;
      sum += weights[xi] * std::log(std::max(p.probs[xi], kLogFloor));
    }
    return sum;
  };

  // modal outcome (largest xi on ties, so the implied peak is interior)
  int modal = 0;
  for (int xi = 1; xi < n; ++xi) {
    if (weights[xi] >= weights[modal]) modal = xi;
  }
  const double window_hi = kPi / gta;
  const double margin = 1e-9 * window_hi;
  const double halfwidth = 1.25 * kPi / (n * gta);

  // a modal outcome of 0 is compatible with a gradient near either window
  // edge (the two edge distributions are xi-mirrors of each other), so both
  // basins are searched and the likelihood decides
  std::vector<double> centers;
  if (modal == 0) centers.push_back(margin);
  centers.push_back(single_a_peak_location(modal, n, params, spacing));

  ScalarMaxResult best;
  bool have_best = false;
  for (const double center : centers) {
    const double lo = std::max(margin, center - halfwidth);
    const double hi = std::min(window_hi - margin, center + halfwidth);
    const ScalarMaxResult candidate = maximize_scalar(ll, lo, hi, 65);
    if (!have_best || candidate.f > best.f + 1e-12 * (std::abs(best.f) + 1e-30)) {
      best = candidate;
      have_best = true;
    }
  }

  return finish_linear_estimate(best.x, n, spacing, best.f, true);
}

GradientEstimate estimate_gradient_single_a(const OutcomeCounts& counts, int n,
                                            const ProbeParams& params, double spacing) {
  return estimate_gradient_single_a_weighted(counts_to_weights(counts), n, params, spacing);
}

GradientEstimate estimate_gradient_single_b_weighted(const std::vector<double>& weights, int n,
                                                     const ProbeParams& params,
                                                     double spacing) {
  detail::require(static_cast<int>(weights.size()) == n, "weights length does not match n");
  total_weight(weights);
  const double gta = params.gamma * params.time * spacing;
  detail::require(gta > 0.0, "gamma*t*a must be positive");

  bool only_zero = true;
  for (int xi = 1; xi < n; ++xi) {
    if (weights[xi] > 0.0) {
      only_zero = false;
      break;
    }
  }
  if (only_zero) return finish_linear_estimate(0.0, n, spacing, 0.0, true);

  const auto ll = [&](double g) {
    const OutcomeDistribution p = prob_b_linear(n, params, spacing, g);
    double sum = 0.0;
    for (int xi = 0; xi < n; ++xi) {
      if (weights[xi] == 0.0) continue;
      sum += weights[xi] * std::log(std::max(p.probs[xi], kLogFloor));
    }
    return sum;
  };

  // positive branch; stay within the locally injective window
  const double window_hi = kPi / (2.0 * gta * (n - 1));
  const ScalarMaxResult best = maximize_scalar(ll, 0.0, window_hi, 65);
  return finish_linear_estimate(best.x, n, spacing, best.f, true);
}

GradientEstimate estimate_gradient_single_b(const OutcomeCounts& counts, int n,
                                            const ProbeParams& params, double spacing) {
  return estimate_gradient_single_b_weighted(counts_to_weights(counts), n, params, spacing);
}

}  // namespace gradfit
