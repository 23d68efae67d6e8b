#include "gradfit/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gradfit {

namespace {

// keeps basis-a trial streams disjoint from the basis-b streams in the demo
constexpr std::uint64_t kFourierStreamSalt = 0x9E3779B97F4A7C15ULL;

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

MeanStd mean_std(const std::vector<double>& xs) {
  const int n = static_cast<int>(xs.size());
  MeanStd out;
  for (double x : xs) out.mean += x;
  out.mean /= n;
  if (n >= 2) {
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.std = std::sqrt(ss / (n - 1));
  }
  return out;
}

/// sqrt(c^T (shots F)^{-1} c) over the gauge-fixed coefficients c_2..c_N.
double bound_from_information(const ChainGeometry& geometry, const FisherMatrix& info,
                              std::int64_t shots) {
  const int n = geometry.n_atoms;
  const std::vector<double> c = lslf_coefficients(geometry);
  Eigen::VectorXd cv(n - 1);
  for (int i = 1; i < n; ++i) cv[i - 1] = c[i];
  const Eigen::VectorXd solved = info.entries.fullPivLu().solve(cv);
  return std::sqrt(cv.dot(solved) / double(shots));
}

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_ci = 0.0;
};

SlopeFit fit_loglog(const std::vector<double>& n_values, const std::vector<double>& y_values) {
  const int m = static_cast<int>(n_values.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < m; ++i) {
    const double x = std::log(n_values[i]);
    const double y = std::log(y_values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = m * sxx - sx * sx;
  SlopeFit fit;
  fit.slope = (m * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / m;
  if (m > 2) {
    double rss = 0.0;
    for (int i = 0; i < m; ++i) {
      const double x = std::log(n_values[i]);
      const double y = std::log(y_values[i]);
      const double r = y - (fit.intercept + fit.slope * x);
      rss += r * r;
    }
    const double se = std::sqrt(rss / (m - 2) / (sxx - sx * sx / m));
    fit.slope_ci = 1.96 * se;
  }
  return fit;
}

}  // namespace

EnsembleStats run_ensemble(const TrialConfig& config, int repeats,
                           std::vector<TrialRecord>* trial_log) {
  detail::require(repeats >= 2, "run_ensemble needs repeats >= 2");
  detail::require(config.true_field.gauge_fixed, "true_field must be gauge-fixed");
  detail::require(config.basis == BasisKind::cascade,
                  "multi-parameter estimation uses the cascade basis");
  const ChainGeometry& geometry = config.geometry;
  const int n = geometry.n_atoms;
  detail::require(config.true_field.size() == n, "field length does not match geometry");

  const ProjectiveBasis basis = cascade_basis(n);
  const SingleExcitationState probe = evolve(w_state(geometry), config.true_field, config.params);
  const OutcomeDistribution dist = outcome_distribution(probe, basis);
  const double true_projection = lslf_fit(geometry, config.true_field.values).gradient;

  std::vector<double> estimates;
  estimates.reserve(repeats);
  int n_failed = 0;
  for (int r = 0; r < repeats; ++r) {
    const std::uint64_t seed = trial_seed(config.seed, static_cast<std::uint64_t>(r));
    const OutcomeCounts counts = sample_counts(dist, config.shots, seed);
    const GradientEstimate est =
        mle_fields_cascade(counts, geometry, config.params, config.gradient_sign_prior);
    if (!est.converged) ++n_failed;
    estimates.push_back(est.g_hat);
    if (trial_log) {
      trial_log->push_back({r, seed, est.g_hat, est.log_likelihood, est.converged});
    }
  }

  const MeanStd ms = mean_std(estimates);
  EnsembleStats stats;
  stats.repeats = repeats;
  stats.mean_g = ms.mean;
  stats.std_g = ms.std;
  stats.bias = ms.mean - true_projection;
  stats.crb = crb_gradient(n, config.params, geometry.spacing, config.shots);

  const FieldModel model = [&](const FieldProfile& f) {
    return outcome_distribution(evolve(w_state(geometry), f, config.params), basis);
  };
  const FisherMatrix fi = fi_matrix_numeric(model, config.true_field, 1e-4);
  stats.fi_crb = bound_from_information(geometry, fi, config.shots);
  if (!std::isfinite(stats.fi_crb) || stats.fi_crb <= 0.0) {
    // the FI vanishes at degenerate points (e.g. the exactly-zero field);
    // evaluate at a nearby offset field instead of extrapolating
    const double offset = 1e-3 / (config.params.gamma * config.params.time * geometry.spacing);
    const FisherMatrix nearby =
        fi_matrix_numeric(model, linear_field(geometry, 0.0, offset), 1e-4);
    stats.fi_crb = bound_from_information(geometry, nearby, config.shots);
  }
  stats.ratio_to_crb = stats.std_g / stats.crb;
  stats.ratio_to_fi_crb = stats.std_g / stats.fi_crb;
  stats.n_failed = n_failed;
  stats.valid = (n_failed <= repeats / 20);
  return stats;
}

GradientRule default_gradient_rule(const ProbeParams& params, double spacing) {
  const double gta = params.gamma * params.time * spacing;
  return [gta](int n) { return 0.2 / (gta * (n - 1)); };
}

ScalingReport sweep_scaling(const std::vector<int>& n_list, std::int64_t shots,
                            const GradientRule& gradient_rule, std::uint64_t seed, int repeats,
                            bool analytic_only, const ProbeParams& params, double spacing) {
  std::vector<int> ns = n_list;
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  detail::require(ns.size() >= 3, "sweep needs at least three distinct chain sizes");

  ScalingReport report;
  report.analytic_only = analytic_only;
  std::vector<double> n_values, y_values;
  for (int n : ns) {
    ScalingRow row;
    row.n = n;
    row.shots = shots;
    row.crb = crb_gradient(n, params, spacing, shots);
    if (analytic_only) {
      row.std_g = row.crb;
    } else {
      const ChainGeometry geometry(n, spacing);
      TrialConfig config{geometry, params,
                         linear_field(geometry, 0.0, gradient_rule(n)),
                         BasisKind::cascade, shots,
                         trial_seed(seed, static_cast<std::uint64_t>(n)), +1.0};
      const EnsembleStats stats = run_ensemble(config, repeats);
      detail::require(stats.valid, "ensemble exceeded the 5% non-convergence budget");
      row.std_g = stats.std_g;
    }
    report.rows.push_back(row);
    n_values.push_back(double(n));
    y_values.push_back(row.std_g);
  }
  const SlopeFit fit = fit_loglog(n_values, y_values);
  report.slope = fit.slope;
  report.intercept = fit.intercept;
  report.slope_ci = fit.slope_ci;
  return report;
}

StateComparison compare_states(int n, const ProbeParams& params, double spacing,
                               std::int64_t shots) {
  detail::require(n >= 2, "compare_states needs n >= 2");
  detail::require(shots >= 1, "shots must be >= 1");
  const ChainGeometry geometry(n, spacing);
  const DiagonalGenerator gen = gradient_generator(geometry, params);
  const std::vector<DiagonalGenerator> gens{gen};

  StateComparison cmp;
  cmp.n = n;
  cmp.shots = shots;
  cmp.qfi_w = qfi_pure_diagonal(w_state(geometry), gens).entries(0, 0);
  cmp.qfi_ghz = qfi_pure_diagonal(ghz_state(n), gens).entries(0, 0);
  cmp.qfi_noon = (n % 2 == 0) ? qfi_pure_diagonal(noon_state(n), gens).entries(0, 0)
                              : std::numeric_limits<double>::quiet_NaN();
  cmp.lagrange_bound = optimal_state_qfi_bound(gen).value;
  const double gt = params.gamma * params.time;
  cmp.sigma_mean_field = 1.0 / (2.0 * gt * std::sqrt(double(shots) * n * n));
  cmp.sigma_half_difference = 1.0 / (gt * std::sqrt(double(shots) * n * n));
  return cmp;
}

NonlinearDemoReport nonlinear_field_demo(const ChainGeometry& geometry,
                                         const ProbeParams& params, double base_gradient,
                                         double quadratic_coeff, std::int64_t shots,
                                         std::uint64_t seed, int repeats) {
  const int n = geometry.n_atoms;
  const FieldProfile field = quadratic_field(geometry, base_gradient, quadratic_coeff);

  NonlinearDemoReport report;
  report.base_gradient = base_gradient;
  report.quadratic_coeff = quadratic_coeff;
  report.lslf_projection = lslf_fit(geometry, field.values).gradient;

  const SingleExcitationState probe = evolve(w_state(geometry), field, params);
  const OutcomeDistribution dist_b = outcome_distribution(probe, cascade_basis(n));
  const OutcomeDistribution dist_a = outcome_distribution(probe, fourier_basis(n));

  if (shots == 0) {
    // noiseless: exact probabilities as fractional counts
    std::vector<double> wb(dist_b.probs.data(), dist_b.probs.data() + n);
    std::vector<double> wa(dist_a.probs.data(), dist_a.probs.data() + n);
    const GradientEstimate fitted = mle_fields_cascade_weighted(wb, geometry, params);
    const GradientEstimate single =
        estimate_gradient_single_a_weighted(wa, n, params, geometry.spacing);
    report.repeats = 1;
    report.fitted_mean = fitted.g_hat;
    report.single_a_mean = single.g_hat;
  } else {
    detail::require(repeats >= 2, "nonlinear_field_demo needs repeats >= 2");
    std::vector<double> fitted_g, single_g;
    for (int r = 0; r < repeats; ++r) {
      const std::uint64_t seed_b = trial_seed(seed, static_cast<std::uint64_t>(r));
      const std::uint64_t seed_a =
          trial_seed(seed ^ kFourierStreamSalt, static_cast<std::uint64_t>(r));
      const OutcomeCounts counts_b = sample_counts(dist_b, shots, seed_b);
      const OutcomeCounts counts_a = sample_counts(dist_a, shots, seed_a);
      fitted_g.push_back(mle_fields_cascade(counts_b, geometry, params).g_hat);
      single_g.push_back(
          estimate_gradient_single_a(counts_a, n, params, geometry.spacing).g_hat);
    }
    const MeanStd fit_ms = mean_std(fitted_g);
    const MeanStd single_ms = mean_std(single_g);
    report.repeats = repeats;
    report.fitted_mean = fit_ms.mean;
    report.fitted_std = fit_ms.std;
    report.single_a_mean = single_ms.mean;
    report.single_a_std = single_ms.std;
  }
  report.fitted_bias = report.fitted_mean - report.lslf_projection;
  report.single_a_bias = report.single_a_mean - report.lslf_projection;
  return report;
}

}  // namespace gradfit
