#include "gradfit/verification.hpp"

#include <chrono>
#include <cmath>
#include <ostream>
#include <random>
#include <set>

#include "gradfit/gradfit.hpp"

namespace gradfit {

namespace {

constexpr double kPi = 3.14159265358979323846;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double x) { return format_short(x); }

FieldProfile random_field(int n, std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> uni(-scale, scale);
  FieldProfile field;
  field.values.resize(n);
  for (double& v : field.values) v = uni(rng);
  return field;
}

OutcomeDistribution project(const ChainGeometry& geometry, const ProbeParams& params,
                            const FieldProfile& field, const ProjectiveBasis& basis) {
  return outcome_distribution(evolve(w_state(geometry), field, params), basis);
}

double simplex_f(const Eigen::VectorXd& p, const Eigen::VectorXd& v) {
  const double m1 = p.dot(v);
  double m2 = 0.0;
  for (int i = 0; i < p.size(); ++i) m2 += p[i] * v[i] * v[i];
  return m2 - m1 * m1;
}

// ---- criteria -------------------------------------------------------------

CriterionResult criterion_qfi_closed_form() {
  const auto start = Clock::now();
  const ProbeParams params;
  double worst_rel = 0.0, worst_prod = 0.0;
  for (int n = 2; n <= 40; ++n) {
    const ChainGeometry geometry(n, 1.0);
    const FisherMatrix general =
        qfi_pure_diagonal(w_state(geometry), field_generators(n, params));
    const FisherMatrix closed = qfi_matrix_w(n, params);
    for (int i = 0; i < n - 1; ++i) {
      for (int j = 0; j < n - 1; ++j) {
        const double rel = std::abs(general.entries(i, j) - closed.entries(i, j)) /
                           std::abs(closed.entries(i, j));
        worst_rel = std::max(worst_rel, rel);
      }
    }
    const Eigen::MatrixXd prod = closed.entries * qfi_matrix_w_inverse(n, params);
    worst_prod = std::max(
        worst_prod,
        (prod - Eigen::MatrixXd::Identity(n - 1, n - 1)).cwiseAbs().maxCoeff());
  }
  const double secs = seconds_since(start);
  CriterionResult res;
  res.id = 1;
  res.name = "qfi-closed-form";
  res.passed = worst_rel <= 1e-10 && worst_prod <= 1e-12 && secs < 1.0;
  res.detail = "max rel dev " + fmt(worst_rel) + ", max |QFI*inv - I| " + fmt(worst_prod) +
               ", " + fmt(secs) + " s";
  res.seconds = secs;
  return res;
}

CriterionResult criterion_basis_b_optimality() {
  const auto start = Clock::now();
  const ProbeParams params;
  double worst_rel = 0.0;
  for (int n = 3; n <= 12; ++n) {
    const ChainGeometry geometry(n, 1.0);
    const ProjectiveBasis basis = cascade_basis(n);
    const FieldModel model = [&](const FieldProfile& f) {
      return project(geometry, params, f, basis);
    };
    const FisherMatrix numeric =
        fi_matrix_numeric(model, linear_field(geometry, 0.0, 1e-3), 1e-4);
    const FisherMatrix qfi = qfi_matrix_w(n, params);
    for (int i = 0; i < n - 1; ++i) {
      for (int j = 0; j < n - 1; ++j) {
        const double rel =
            std::abs(numeric.entries(i, j) - qfi.entries(i, j)) / std::abs(qfi.entries(i, j));
        worst_rel = std::max(worst_rel, rel);
      }
    }
  }
  const double secs = seconds_since(start);
  CriterionResult res;
  res.id = 2;
  res.name = "basis-b-optimality";
  res.passed = worst_rel <= 0.01 && secs < 10.0;
  res.detail = "max rel dev " + fmt(worst_rel) + " (gate 1%), " + fmt(secs) + " s";
  res.seconds = secs;
  return res;
}

CriterionResult criterion_basis_a_degeneracy() {
  const auto start = Clock::now();
  const ProbeParams params;
  double worst_abs = 0.0, worst_sv = 0.0;
  for (int n = 3; n <= 12; ++n) {
    const ChainGeometry geometry(n, 1.0);
    const ProjectiveBasis basis = fourier_basis(n);
    const FieldModel model = [&](const FieldProfile& f) {
      return project(geometry, params, f, basis);
    };
    const FisherMatrix numeric =
        fi_matrix_numeric(model, linear_field(geometry, 0.0, 0.1), 3e-5);
    const FisherMatrix closed = fi_matrix_a_linear(n, params);
    worst_abs = std::max(worst_abs, (numeric.entries - closed.entries).cwiseAbs().maxCoeff());
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(closed.entries);
    const auto& sv = svd.singularValues();
    worst_sv = std::max(worst_sv, sv(sv.size() - 1) / sv(0));
  }
  const double secs = seconds_since(start);
  CriterionResult res;
  res.id = 3;
  res.name = "basis-a-degeneracy";
  res.passed = worst_abs <= 1e-6 && worst_sv < 1e-8;
  res.detail = "max abs dev " + fmt(worst_abs) + ", max sv ratio " + fmt(worst_sv) + ", " +
               fmt(secs) + " s";
  res.seconds = secs;
  return res;
}

CriterionResult criterion_single_parameter() {
  const auto start = Clock::now();
  const ProbeParams params;
  const double spacing = 1.0;
  double worst_a = 0.0, worst_b = 0.0;
  for (int n = 2; n <= 100; ++n) {
    const double exact = qfi_single_w(n, params, spacing).value;
    for (const double g : {0.1, 0.3, 0.7}) {
      const ScalarModel model = [&](double gg) {
        return prob_a_linear(n, params, spacing, gg);
      };
      const double fi = fi_single_numeric(model, g, 2e-4 / n).value;
      worst_a = std::max(worst_a, std::abs(fi - exact) / exact);
    }
    const ScalarModel model_b = [&](double gg) {
      return prob_b_linear(n, params, spacing, gg);
    };
    const double fi_b = fi_single_numeric(model_b, 1e-3, 1e-5).value;
    worst_b = std::max(worst_b, std::abs(fi_b - exact) / exact);
  }
  const double secs = seconds_since(start);
  CriterionResult res;
  res.id = 4;
  res.name = "single-parameter-identities";
  res.passed = worst_a <= 1e-6 && worst_b <= 0.01;
  res.detail = "p^a max rel dev " + fmt(worst_a) + ", p^b max rel dev " + fmt(worst_b) + ", " +
               fmt(secs) + " s";
  res.seconds = secs;
  return res;
}

CriterionResult criterion_bound_consistency() {
  const auto start = Clock::now();
  const ProbeParams params;
  const double spacing = 1.0;
  double worst = 0.0;
  for (int n = 2; n <= 50; ++n) {
    const ChainGeometry geometry(n, spacing);
    const std::vector<double> c = lslf_coefficients(geometry);
    const Eigen::MatrixXd inv = qfi_matrix_w_inverse(n, params);
    double quad = 0.0;
    for (int i = 1; i < n; ++i) {
      for (int j = 1; j < n; ++j) quad += c[i] * inv(i - 1, j - 1) * c[j];
    }
    for (const std::int64_t shots : {std::int64_t{1}, std::int64_t{7}}) {
      const double from_matrix = std::sqrt(quad / double(shots));
      const double closed = crb_gradient(n, params, spacing, shots);
      worst = std::max(worst, std::abs(from_matrix - closed));
    }
  }
  const double at_n3 = crb_gradient(3, params, spacing, 1);
  const double n3_dev = std::abs(at_n3 - 0.306186);
  const double secs = seconds_since(start);
  CriterionResult res;
  res.id = 5;
  res.name = "bound-consistency";
  res.passed = worst <= 1e-12 && n3_dev <= 1e-6;
  res.detail = "max |closed - quadratic| " + fmt(worst) + ", N=3 value dev " + fmt(n3_dev) +
               ", " + fmt(secs) + " s";
  res.seconds = secs;
  return res;
}

CriterionResult criterion_monte_carlo() {
  const auto start = Clock::now();
  const ProbeParams params;
  const ChainGeometry geometry(8, 1.0);
  TrialConfig config{geometry,   params, linear_field(geometry, 0.0, 0.05),
                     BasisKind::cascade, 100000, 20250810ULL, +1.0};
  const EnsembleStats stats = run_ensemble(config, 200);
  const double crb_ref_dev = std::abs(stats.crb / 3.45e-4 - 1.0);
  const double secs = seconds_since(start);
  CriterionResult res;
  res.id = 6;
  res.name = "monte-carlo-saturation";
  res.passed = stats.valid && stats.ratio_to_fi_crb >= 0.9 && stats.ratio_to_fi_crb <= 1.2 &&
               stats.ratio_to_crb >= 0.9 && stats.ratio_to_crb <= 1.4 &&
               crb_ref_dev <= 1e-3 && secs < 300.0;
  res.detail = "std " + fmt(stats.std_g) + ", ratio_to_fi_crb " + fmt(stats.ratio_to_fi_crb) +
               " in [0.9,1.2], ratio_to_crb " + fmt(stats.ratio_to_crb) + " in [0.9,1.4], " +
               std::to_string(stats.n_failed) + " failed, " + fmt(secs) + " s";
  res.seconds = secs;
  return res;
}

CriterionResult criterion_scaling() {
  const auto start = Clock::now();
  const ProbeParams params;
  const GradientRule rule = default_gradient_rule(params, 1.0);
  const ScalingReport analytic =
      sweep_scaling({8, 16, 32, 64}, 100000, rule, 1, 200, /*analytic_only=*/true);
  const ScalingReport empirical =
      sweep_scaling({4, 8, 16, 32}, 100000, rule, 424242ULL, 200, /*analytic_only=*/false);
  const double secs = seconds_since(start);
  CriterionResult res;
  res.id = 7;
  res.name = "heisenberg-scaling";
  res.passed = analytic.slope >= -1.02 && analytic.slope <= -0.98 &&
               empirical.slope >= -1.15 && empirical.slope <= -0.85;
  res.detail = "analytic slope " + fmt(analytic.slope) + " in [-1.02,-0.98], empirical slope " +
               fmt(empirical.slope) + " in [-1.15,-0.85], " + fmt(secs) + " s";
  res.seconds = secs;
  return res;
}

CriterionResult criterion_ghz_noon_lagrange() {
  const auto start = Clock::now();
  const ProbeParams params;
  const double spacing = 1.0;
  double worst_rel = 0.0;
  bool ok = true;
  for (int n = 2; n <= 10; ++n) {
    const StateComparison cmp = compare_states(n, params, spacing, 1);
    const double gta = params.gamma * params.time * spacing;
    const double ghz_expected = double(n) * n * (n - 1.0) * (n - 1.0) * gta * gta;
    worst_rel = std::max(worst_rel, std::abs(cmp.qfi_ghz - ghz_expected) / ghz_expected);
    if (n % 2 == 0) {
      const double noon_expected = std::pow(double(n), 4) * gta * gta / 4.0;
      worst_rel = std::max(worst_rel, std::abs(cmp.qfi_noon - noon_expected) / noon_expected);
    }
    worst_rel = std::max(worst_rel, std::abs(cmp.lagrange_bound - cmp.qfi_ghz) / cmp.qfi_ghz);
    const double gt = params.gamma * params.time;
    if (cmp.sigma_mean_field != 1.0 / (2.0 * gt * std::sqrt(double(n) * n)) ||
        cmp.sigma_half_difference != 1.0 / (gt * std::sqrt(double(n) * n))) {
      ok = false;
    }
  }
  // brute-force simplex oracle against the closed-form optimum, N <= 4
  double worst_oracle = 0.0;
  for (int n = 2; n <= 4; ++n) {
    const ChainGeometry geometry(n, spacing);
    const DiagonalGenerator gen = gradient_generator(geometry, params);
    std::set<double> distinct;
    for (int mask = 0; mask < (1 << n); ++mask) {
      std::string bits(n, '0');
      for (int j = 0; j < n; ++j) {
        if (mask & (1 << j)) bits[j] = '1';
      }
      distinct.insert(gen.eigenvalue(bits));
    }
    Eigen::VectorXd values(static_cast<int>(distinct.size()));
    int idx = 0;
    for (double v : distinct) values[idx++] = v;
    const double fmax = max_variance_over_simplex(values);
    const double bound = optimal_state_qfi_bound(gen).value;  // = 4 * max variance
    worst_oracle = std::max(worst_oracle, std::abs(4.0 * fmax - bound) / bound);
  }
  const double secs = seconds_since(start);
  CriterionResult res;
  res.id = 8;
  res.name = "ghz-noon-lagrange";
  res.passed = ok && worst_rel <= 1e-12 && worst_oracle <= 1e-6;
  res.detail = "max rel dev " + fmt(worst_rel) + ", oracle rel dev " + fmt(worst_oracle) +
               ", sigma bounds exact: " + (ok ? "yes" : "no") + ", " + fmt(secs) + " s";
  res.seconds = secs;
  return res;
}

CriterionResult criterion_structure_properties() {
  const auto start = Clock::now();
  const ProbeParams params;
  std::mt19937_64 rng(7777);
  double worst_reflect = 0.0, worst_triangular = 0.0, worst_negation = 0.0, worst_oracle = 0.0;
  for (const int n : {2, 3, 5, 8, 12}) {
    const ChainGeometry geometry(n, 1.0);
    const ProjectiveBasis fb = fourier_basis(n);
    const ProjectiveBasis cb = cascade_basis(n);
    for (int rep = 0; rep < 5; ++rep) {
      const FieldProfile field = random_field(n, rng, 1.0);

      // reflected-negated field, identical fourier distribution
      FieldProfile reflected = field;
      for (int j = 0; j < n; ++j) reflected.values[j] = -field.values[n - 1 - j];
      worst_reflect = std::max(worst_reflect,
                               (project(geometry, params, field, fb).probs -
                                project(geometry, params, reflected, fb).probs)
                                   .cwiseAbs()
                                   .maxCoeff());

      // cascade outcome xi (xi >= 1) ignores B_j for j > xi+1
      const Eigen::VectorXd base = project(geometry, params, field, cb).probs;
      for (int xi = 1; xi < n - 1; ++xi) {
        FieldProfile bumped = field;
        for (int j = xi + 1; j < n; ++j) bumped.values[j] += 0.37 * (j - xi);
        const Eigen::VectorXd moved = project(geometry, params, bumped, cb).probs;
        worst_triangular = std::max(worst_triangular, std::abs(moved[xi] - base[xi]));
      }

      // global negation: cascade identical, fourier identical after xi -> N-xi mod N
      FieldProfile negated = field;
      for (double& v : negated.values) v = -v;
      worst_negation = std::max(worst_negation,
                                (project(geometry, params, field, cb).probs -
                                 project(geometry, params, negated, cb).probs)
                                    .cwiseAbs()
                                    .maxCoeff());
      const Eigen::VectorXd pa = project(geometry, params, field, fb).probs;
      const Eigen::VectorXd pa_neg = project(geometry, params, negated, fb).probs;
      for (int xi = 0; xi < n; ++xi) {
        worst_negation = std::max(worst_negation, std::abs(pa_neg[xi] - pa[(n - xi) % n]));
      }
    }

    // closed forms vs projection oracle, generic and removable-singularity points
    std::vector<double> gs = {0.0, 0.05, 0.7, kPi / 4.0, kPi};
    for (int xi = 0; xi < n; ++xi) gs.push_back((1.0 - double(xi) / n) * kPi);
    for (const double g : gs) {
      const FieldProfile lf = linear_field(geometry, 0.0, g);
      const Eigen::VectorXd oracle_a = project(geometry, params, lf, fb).probs;
      const Eigen::VectorXd oracle_b = project(geometry, params, lf, cb).probs;
      worst_oracle = std::max(
          worst_oracle,
          (prob_a_linear(n, params, 1.0, g).probs - oracle_a).cwiseAbs().maxCoeff());
      worst_oracle = std::max(
          worst_oracle,
          (prob_b_linear(n, params, 1.0, g).probs - oracle_b).cwiseAbs().maxCoeff());
    }
  }
  const double secs = seconds_since(start);
  CriterionResult res;
  res.id = 9;
  res.name = "structure-properties";
  res.passed = worst_reflect <= 1e-12 && worst_triangular <= 1e-12 &&
               worst_negation <= 1e-12 && worst_oracle <= 1e-12;
  res.detail = "reflect " + fmt(worst_reflect) + ", triangular " + fmt(worst_triangular) +
               ", negation " + fmt(worst_negation) + ", closed-form vs oracle " +
               fmt(worst_oracle) + ", " + fmt(secs) + " s";
  res.seconds = secs;
  return res;
}

CriterionResult criterion_lslf() {
  const auto start = Clock::now();
  const ProbeParams params;
  double worst_identity = 0.0, worst_recovery = 0.0;
  for (const int n : {2, 3, 5, 10, 25}) {
    // identities hold for any origin
    const ChainGeometry shifted(n, 0.5, -1.25);
    const std::vector<double> c = lslf_coefficients(shifted);
    double sum_c = 0.0, sum_cx = 0.0;
    for (int i = 0; i < n; ++i) {
      sum_c += c[i];
      sum_cx += c[i] * shifted.position(i + 1);
    }
    worst_identity = std::max(worst_identity, std::abs(sum_c));
    worst_identity = std::max(worst_identity, std::abs(sum_cx - 1.0));

    const ChainGeometry geometry(n, 0.5);
    const FieldProfile lf = linear_field(geometry, 0.75, -0.3);
    const LinearFit fit = lslf_fit(geometry, lf.values);
    worst_recovery = std::max(worst_recovery, std::abs(fit.gradient - (-0.3)));
    worst_recovery = std::max(worst_recovery, std::abs(fit.intercept - 0.75));
  }

  const ChainGeometry geometry(5, 1.0);
  const NonlinearDemoReport demo =
      nonlinear_field_demo(geometry, params, 0.02, 0.005, /*shots=*/0, /*seed=*/0);
  const double projection_dev = std::abs(demo.lslf_projection - 0.04);
  const double fitted_dev = std::abs(demo.fitted_mean - demo.lslf_projection);

  const double secs = seconds_since(start);
  CriterionResult res;
  res.id = 10;
  res.name = "lslf-identities";
  res.passed = worst_identity <= 1e-12 && worst_recovery <= 1e-12 &&
               projection_dev <= 1e-12 && fitted_dev <= 1e-8;
  res.detail = "identities " + fmt(worst_identity) + ", linear recovery " + fmt(worst_recovery) +
               ", quadratic projection dev " + fmt(projection_dev) + ", fitted vs projection " +
               fmt(fitted_dev) + ", " + fmt(secs) + " s";
  res.seconds = secs;
  return res;
}

}  // namespace

double max_variance_over_simplex(const Eigen::VectorXd& values, int grid_resolution) {
  const int k = static_cast<int>(values.size());
  detail::require(k >= 1, "empty value set");
  if (k == 1) return 0.0;

  // composition grid: all p with entries multiples of 1/R
  const int r = grid_resolution;
  Eigen::VectorXd best_p = Eigen::VectorXd::Zero(k);
  best_p[0] = 1.0;
  double best_f = simplex_f(best_p, values);
  std::vector<int> comp(k, 0);
  comp[0] = r;
  while (true) {
    Eigen::VectorXd p(k);
    for (int i = 0; i < k; ++i) p[i] = double(comp[i]) / r;
    const double f = simplex_f(p, values);
    if (f > best_f) {
      best_f = f;
      best_p = p;
    }
    // next composition of r into k parts (colex odometer)
    int i = k - 2;
    while (i >= 0 && comp[i] == 0) --i;
    if (i < 0) break;
    --comp[i];
    int tail = comp[k - 1] + 1;
    comp[k - 1] = 0;
    comp[i + 1] = tail;
    for (int j = i + 2; j < k; ++j) {
      comp[i + 1] += comp[j];
      comp[j] = 0;
    }
  }

  // pairwise mass-transfer refinement
  double delta = 0.5 / r;
  while (delta > 1e-10) {
    bool improved = false;
    for (int i = 0; i < k; ++i) {
      if (best_p[i] < delta) continue;
      for (int j = 0; j < k; ++j) {
        if (i == j) continue;
        Eigen::VectorXd trial = best_p;
        trial[i] -= delta;
        trial[j] += delta;
        const double f = simplex_f(trial, values);
        if (f > best_f + 1e-15) {
          best_f = f;
          best_p = trial;
          improved = true;
        }
      }
    }
    if (!improved) delta *= 0.5;
  }
  return best_f;
}

std::vector<CriterionResult> run_verification(std::ostream& log) {
  std::vector<CriterionResult> results;
  int next_id = 1;
  const auto run = [&](CriterionResult (*criterion)()) {
    CriterionResult res;
    try {
      res = criterion();
    } catch (const std::exception& e) {
      res.id = next_id;
      res.name = "criterion-" + std::to_string(next_id);
      res.passed = false;
      res.detail = std::string("exception: ") + e.what();
    }
    next_id = res.id + 1;
    log << (res.passed ? "PASS" : "FAIL") << "  [" << res.id << "] " << res.name << ": "
        << res.detail << "\n";
    log.flush();
    results.push_back(std::move(res));
  };
  run(&criterion_qfi_closed_form);
  run(&criterion_basis_b_optimality);
  run(&criterion_basis_a_degeneracy);
  run(&criterion_single_parameter);
  run(&criterion_bound_consistency);
  run(&criterion_monte_carlo);
  run(&criterion_scaling);
  run(&criterion_ghz_noon_lagrange);
  run(&criterion_structure_properties);
  run(&criterion_lslf);
  return results;
}

bool all_passed(const std::vector<CriterionResult>& results) {
  for (const auto& res : results) {
    if (!res.passed) return false;
  }
  return true;
}

}  // namespace gradfit
