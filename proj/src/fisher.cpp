#include "gradfit/fisher.hpp"

#include <cmath>

namespace gradfit {

namespace {

constexpr double kProbFloor = 1e-12;

/// 4*Cov(h_m, h_n) over a diagonal probability/eigenvalue table.
/// values(row, m) is the eigenvalue of generator m on support point `row`.
FisherMatrix qfi_from_support(const Eigen::VectorXd& probs, const Eigen::MatrixXd& values) {
  const int n_gen = static_cast<int>(values.cols());
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(n_gen);
  for (int m = 0; m < n_gen; ++m) mean[m] = probs.dot(values.col(m));
  FisherMatrix fm;
  fm.entries.resize(n_gen, n_gen);
  for (int m = 0; m < n_gen; ++m) {
    for (int n = m; n < n_gen; ++n) {
      double second = 0.0;
      for (int r = 0; r < probs.size(); ++r) second += probs[r] * values(r, m) * values(r, n);
      const double cov = second - mean[m] * mean[n];
      fm.entries(m, n) = 4.0 * cov;
      fm.entries(n, m) = fm.entries(m, n);
    }
  }
  return fm;
}

}  // namespace

FisherMatrix fi_matrix_numeric(const FieldModel& model, const FieldProfile& field, double step) {
  detail::require(field.gauge_fixed, "fi_matrix_numeric requires a gauge-fixed field");
  detail::require(step > 0.0, "step must be positive");
  const int n = field.size();
  detail::require(n >= 2, "field needs at least two entries");

  const OutcomeDistribution base = model(field);
  const int n_out = base.size();

  // central differences d p / d B_m, m = 2..N
  Eigen::MatrixXd dp(n - 1, n_out);
  for (int m = 1; m < n; ++m) {
    FieldProfile plus = field;
    FieldProfile minus = field;
    plus.values[m] += step;
    minus.values[m] -= step;
    const Eigen::VectorXd pp = model(plus).probs;
    const Eigen::VectorXd pm = model(minus).probs;
    dp.row(m - 1) = ((pp - pm) / (2.0 * step)).transpose();
  }

  Eigen::VectorXd safe = base.probs.cwiseMax(kProbFloor);
  FisherMatrix fm;
  fm.entries.resize(n - 1, n - 1);
  for (int i = 0; i < n - 1; ++i) {
    for (int j = i; j < n - 1; ++j) {
      double sum = 0.0;
      for (int xi = 0; xi < n_out; ++xi) sum += dp(i, xi) * dp(j, xi) / safe[xi];
      fm.entries(i, j) = sum;
      fm.entries(j, i) = sum;
    }
  }
  return fm;
}

FisherMatrix fi_matrix_a_linear(int n, const ProbeParams& params) {
  detail::require(n >= 2, "fi_matrix_a_linear needs n >= 2");
  const double gt = params.gamma * params.time;
  const double scale = 8.0 * gt * gt / n;
  FisherMatrix fm;
  fm.gamma = params.gamma;
  fm.time = params.time;
  fm.entries = Eigen::MatrixXd::Zero(n - 1, n - 1);
  for (int m = 2; m <= n; ++m) {
    for (int k = 2; k <= n; ++k) {
      double v = 0.0;
      if (m == k) v += 1.0;
      if (m + k == n + 1) v -= 1.0;
      fm.entries(m - 2, k - 2) = scale * v;
    }
  }
  fm.singular = (n >= 3);
  return fm;
}

FisherMatrix fi_matrix_b_origin(int n, const ProbeParams& params) {
  FisherMatrix fm = qfi_matrix_w(n, params);
  return fm;
}

FisherMatrix qfi_matrix_w(int n, const ProbeParams& params) {
  detail::require(n >= 2, "qfi_matrix_w needs n >= 2");
  const double gt = params.gamma * params.time;
  const double scale = 16.0 * gt * gt / (double(n) * n);
  FisherMatrix fm;
  fm.gamma = params.gamma;
  fm.time = params.time;
  fm.entries = scale * (double(n) * Eigen::MatrixXd::Identity(n - 1, n - 1) -
                        Eigen::MatrixXd::Ones(n - 1, n - 1));
  return fm;
}

Eigen::MatrixXd qfi_matrix_w_inverse(int n, const ProbeParams& params) {
  detail::require(n >= 2, "qfi_matrix_w_inverse needs n >= 2");
  const double gt = params.gamma * params.time;
  const double scale = n / (16.0 * gt * gt);
  return scale * (Eigen::MatrixXd::Identity(n - 1, n - 1) +
                  Eigen::MatrixXd::Ones(n - 1, n - 1));
}

std::vector<DiagonalGenerator> field_generators(int n, const ProbeParams& params) {
  detail::require(n >= 2, "field_generators needs n >= 2");
  std::vector<DiagonalGenerator> gens;
  gens.reserve(n - 1);
  for (int m = 2; m <= n; ++m) gens.push_back(site_generator(n, m, params));
  return gens;
}

FisherMatrix qfi_pure_diagonal(const SparseDiagonalState& state,
                               const std::vector<DiagonalGenerator>& generators) {
  detail::require(!state.terms.empty(), "empty state");
  detail::require(!generators.empty(), "no generators");
  const int n_terms = static_cast<int>(state.terms.size());
  const int n_gen = static_cast<int>(generators.size());

  Eigen::VectorXd probs(n_terms);
  double norm = 0.0;
  for (int r = 0; r < n_terms; ++r) {
    probs[r] = std::norm(state.terms[r].amp);
    norm += probs[r];
  }
  detail::require(std::abs(norm - 1.0) <= 1e-12, "state is not normalized");

  Eigen::MatrixXd values(n_terms, n_gen);
  for (int r = 0; r < n_terms; ++r) {
    for (int m = 0; m < n_gen; ++m) {
      values(r, m) = generators[m].eigenvalue(state.terms[r].bits);
    }
  }
  return qfi_from_support(probs, values);
}

FisherMatrix qfi_pure_diagonal(const SingleExcitationState& state,
                               const std::vector<DiagonalGenerator>& generators) {
  detail::require(state.size() >= 1, "empty state");
  detail::require(!generators.empty(), "no generators");
  const int n = state.size();
  const int n_gen = static_cast<int>(generators.size());

  Eigen::VectorXd probs = state.amps.cwiseAbs2();
  detail::require(std::abs(probs.sum() - 1.0) <= 1e-12, "state is not normalized");

  Eigen::MatrixXd values(n, n_gen);
  for (int j = 1; j <= n; ++j) {
    for (int m = 0; m < n_gen; ++m) {
      detail::require(generators[m].size() == n, "generator length does not match state");
      values(j - 1, m) = generators[m].eigenvalue_single_excitation(j);
    }
  }
  return qfi_from_support(probs, values);
}

ScalarInformation qfi_single_w(int n, const ProbeParams& params, double spacing) {
  detail::require(n >= 2, "qfi_single_w needs n >= 2");
  const double gta2 = 2.0 * params.gamma * params.time * spacing;
  return {gta2 * gta2 * (double(n) * n - 1.0) / 3.0};
}

ScalarInformation fi_single_numeric(const ScalarModel& model, double g, double step) {
  detail::require(step > 0.0, "step must be positive");
  const Eigen::VectorXd p = model(g).probs;
  const Eigen::VectorXd pp = model(g + step).probs;
  const Eigen::VectorXd pm = model(g - step).probs;
  double fi = 0.0;
  for (int xi = 0; xi < p.size(); ++xi) {
    const double dp = (pp[xi] - pm[xi]) / (2.0 * step);
    fi += dp * dp / std::max(p[xi], kProbFloor);
  }
  return {fi};
}

ScalarInformation optimal_state_qfi_bound(const DiagonalGenerator& generator) {
  detail::require(generator.size() >= 1, "empty generator");
  // h ranges over [-sum|g_j|, +sum|g_j|]; best pure state splits 1/2-1/2
  // between the extremes, so F_Q^max = (h_max - h_min)^2.
  const double half_range = generator.site_weights.cwiseAbs().sum();
  const double range = 2.0 * half_range;
  return {range * range};
}

}  // namespace gradfit
