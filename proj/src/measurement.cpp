#include "gradfit/measurement.hpp"

#include <cmath>

#include "gradfit/chain.hpp"

namespace gradfit {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSinBranchTol = 1e-9;

}  // namespace

ProjectiveBasis fourier_basis(int n) {
  detail::require(n >= 2, "fourier_basis needs n >= 2");
  ProjectiveBasis basis;
  basis.rows.resize(n, n);
  const double norm = 1.0 / std::sqrt(double(n));
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      basis.rows(k, j) = std::polar(norm, 2.0 * kPi * k * j / n);
    }
  }
  basis.label = BasisKind::fourier;
  return basis;
}

ProjectiveBasis cascade_basis(int n) {
  detail::require(n >= 2, "cascade_basis needs n >= 2");
  ProjectiveBasis basis;
  basis.rows = Eigen::MatrixXcd::Zero(n, n);
  const double norm = 1.0 / std::sqrt(double(n));
  for (int j = 0; j < n; ++j) basis.rows(0, j) = norm;
  for (int k = 1; k < n; ++k) {
    const double scale = std::sqrt(k / (k + 1.0));
    for (int j = 0; j < k; ++j) basis.rows(k, j) = scale / k;
    basis.rows(k, k) = -scale;
  }
  basis.label = BasisKind::cascade;
  return basis;
}

OutcomeDistribution outcome_distribution(const SingleExcitationState& state,
                                         const ProjectiveBasis& basis) {
  detail::require(basis.size() == state.size(), "basis and state dimensions differ");
  OutcomeDistribution dist;
  dist.probs = (basis.rows.conjugate() * state.amps).cwiseAbs2();
  return dist;
}

double dirichlet_ratio(int k, double x) {
  const double s = std::sin(x);
  if (std::abs(s) < kSinBranchTol) {
    // removable singularity at x = m*pi; limit k*cos(kx)/cos(x)
    return k * std::cos(k * x) / std::cos(x);
  }
  return std::sin(k * x) / s;
}

OutcomeDistribution prob_a_linear(int n, const ProbeParams& params, double spacing,
                                  double gradient) {
  detail::require(n >= 2, "prob_a_linear needs n >= 2");
  const double theta = params.gamma * params.time * spacing * gradient;
  OutcomeDistribution dist;
  dist.probs.resize(n);
  for (int xi = 0; xi < n; ++xi) {
    const double d = dirichlet_ratio(n, theta + xi * kPi / n) / n;
    dist.probs[xi] = d * d;
  }
  return dist;
}

OutcomeDistribution prob_b_linear(int n, const ProbeParams& params, double spacing,
                                  double gradient) {
  detail::require(n >= 2, "prob_b_linear needs n >= 2");
  const double theta = params.gamma * params.time * spacing * gradient;
  OutcomeDistribution dist;
  dist.probs.resize(n);
  const double d0 = dirichlet_ratio(n, theta) / n;
  dist.probs[0] = d0 * d0;
  for (int k = 1; k < n; ++k) {
    const double s = dirichlet_ratio(k, theta) / k;  // sin(k theta)/(k sin theta)
    dist.probs[k] =
        k / (n * (k + 1.0)) * (1.0 - 2.0 * std::cos((k + 1) * theta) * s + s * s);
  }
  return dist;
}

OutcomeDistribution prob_b_linear_small_angle(int n, const ProbeParams& params, double spacing,
                                              double gradient) {
  detail::require(n >= 2, "prob_b_linear_small_angle needs n >= 2");
  const double theta = params.gamma * params.time * spacing * gradient;
  const double t2 = theta * theta;
  OutcomeDistribution dist;
  dist.probs.resize(n);
  dist.probs[0] = 1.0 - (double(n) * n - 1.0) * t2 / 3.0;
  for (int k = 1; k < n; ++k) dist.probs[k] = k * (1.0 + k) * t2 / n;
  return dist;
}

Eigen::MatrixXcd coherence_operator(const ProjectiveBasis& basis) {
  const int n = basis.size();
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(n, n);
  for (int xi = 0; xi < n; ++xi) {
    const Eigen::VectorXcd row = basis.rows.row(xi).transpose();
    const double weight = (xi == 0) ? double(n - 1) : -1.0;
    c += weight * (row * row.adjoint());
  }
  return c;
}

}  // namespace gradfit
