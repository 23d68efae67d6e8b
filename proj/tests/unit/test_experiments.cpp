#include <cmath>

#include "doctest.h"
#include "gradfit/experiments.hpp"

using namespace gradfit;

TEST_CASE("run_ensemble smoke and contracts") {
  const ProbeParams params;
  const ChainGeometry geometry(3, 1.0);
  TrialConfig config{geometry, params, linear_field(geometry, 0.0, 0.0),
                     BasisKind::cascade, 1, 11, +1.0};

  SUBCASE("one-shot trivial field runs and reports finite stats") {
    const EnsembleStats stats = run_ensemble(config, 2);
    CHECK(stats.repeats == 2);
    CHECK(std::isfinite(stats.mean_g));
    CHECK(std::isfinite(stats.std_g));
    CHECK(stats.crb > 0.0);
    CHECK(std::isfinite(stats.fi_crb));
    CHECK(stats.fi_crb > 0.0);
    CHECK(std::isfinite(stats.ratio_to_crb));
    CHECK(std::isfinite(stats.ratio_to_fi_crb));
  }

  SUBCASE("repeats below two are rejected") {
    CHECK_THROWS_AS(run_ensemble(config, 1), std::invalid_argument);
  }

  SUBCASE("non-gauge-fixed field is rejected") {
    TrialConfig bad = config;
    bad.true_field = linear_field(geometry, 0.3, 0.0);
    CHECK_THROWS_AS(run_ensemble(bad, 2), std::invalid_argument);
  }

  SUBCASE("per-trial log is reproducible from the master seed") {
    std::vector<TrialRecord> log1, log2;
    run_ensemble(config, 3, &log1);
    run_ensemble(config, 3, &log2);
    REQUIRE(log1.size() == 3);
    for (int i = 0; i < 3; ++i) {
      CHECK(log1[i].seed == log2[i].seed);
      CHECK(log1[i].g_hat == log2[i].g_hat);
    }
  }
}

TEST_CASE("moderate ensemble tracks the bounds") {
  const ProbeParams params;
  const ChainGeometry geometry(6, 1.0);
  TrialConfig config{geometry, params, linear_field(geometry, 0.0, 0.04),
                     BasisKind::cascade, 20000, 2024, +1.0};
  const EnsembleStats stats = run_ensemble(config, 60);
  CHECK(stats.valid);
  CHECK(stats.ratio_to_fi_crb > 0.7);
  CHECK(stats.ratio_to_fi_crb < 1.4);
  CHECK(std::abs(stats.bias) < 4.0 * stats.std_g / std::sqrt(60.0));
}

TEST_CASE("sweep_scaling") {
  const ProbeParams params;
  const GradientRule rule = default_gradient_rule(params, 1.0);

  SUBCASE("analytic slope approaches -1") {
    const ScalingReport report =
        sweep_scaling({8, 16, 32, 64}, 100000, rule, 1, 10, /*analytic_only=*/true);
    CHECK(report.slope > -1.02);
    CHECK(report.slope < -0.98);
    CHECK(report.rows.size() == 4);
    CHECK(report.rows.front().n == 8);
    CHECK(report.rows.back().n == 64);
  }

  SUBCASE("fewer than three sizes is an error") {
    CHECK_THROWS_AS(sweep_scaling({8}, 1000, rule, 1, 10, true), std::invalid_argument);
    CHECK_THROWS_AS(sweep_scaling({8, 16}, 1000, rule, 1, 10, true), std::invalid_argument);
  }

  SUBCASE("small empirical sweep lands near the analytic trend") {
    const ScalingReport report =
        sweep_scaling({4, 8, 16}, 20000, rule, 77, 40, /*analytic_only=*/false);
    CHECK(report.slope < -0.7);
    CHECK(report.slope > -1.3);
  }
}

TEST_CASE("compare_states tabulates the closed forms") {
  const ProbeParams params;

  SUBCASE("N=3 values") {
    const StateComparison cmp = compare_states(3, params, 1.0, 1);
    CHECK(cmp.qfi_w == doctest::Approx(32.0 / 3.0).epsilon(1e-13));
    CHECK(cmp.qfi_ghz == doctest::Approx(36.0).epsilon(1e-13));
    CHECK(cmp.lagrange_bound == doctest::Approx(36.0).epsilon(1e-13));
    CHECK(std::isnan(cmp.qfi_noon));
  }

  SUBCASE("N=4 values") {
    const StateComparison cmp = compare_states(4, params, 1.0, 1);
    CHECK(cmp.qfi_noon == doctest::Approx(64.0).epsilon(1e-13));
    CHECK(cmp.qfi_ghz == doctest::Approx(144.0).epsilon(1e-13));
  }

  SUBCASE("reinterpreted bounds") {
    const StateComparison cmp = compare_states(10, params, 1.0, 1);
    CHECK(cmp.sigma_mean_field == doctest::Approx(1.0 / 20.0).epsilon(1e-14));
    CHECK(cmp.sigma_half_difference == doctest::Approx(1.0 / 10.0).epsilon(1e-14));
  }

  SUBCASE("ghz dominates w for every tested n") {
    for (int n = 2; n <= 12; ++n) {
      const StateComparison cmp = compare_states(n, params, 1.0, 1);
      CHECK(cmp.qfi_ghz >= cmp.qfi_w);
      CHECK(cmp.qfi_w >= 0.0);
      CHECK(cmp.lagrange_bound == doctest::Approx(cmp.qfi_ghz).epsilon(1e-13));
    }
  }
}

TEST_CASE("nonlinear_field_demo") {
  const ProbeParams params;
  const ChainGeometry geometry(5, 1.0);

  SUBCASE("noiseless quadratic field returns the coefficient contraction") {
    const NonlinearDemoReport report =
        nonlinear_field_demo(geometry, params, 0.02, 0.005, 0, 0);
    // sum c_i B_i = G + q * sum c_i (j-1)^2 = 0.02 + 0.005 * 4 = 0.04
    CHECK(report.lslf_projection == doctest::Approx(0.04).epsilon(1e-13));
    CHECK(report.fitted_mean == doctest::Approx(report.lslf_projection).epsilon(1e-8));
    // the single-parameter basis-a estimator fits a strictly linear model and
    // lands elsewhere
    CHECK(std::isfinite(report.single_a_mean));
  }

  SUBCASE("q = 0 reduces to run_ensemble") {
    TrialConfig config{geometry, params, linear_field(geometry, 0.0, 0.03),
                       BasisKind::cascade, 5000, 999, +1.0};
    const EnsembleStats stats = run_ensemble(config, 20);
    const NonlinearDemoReport report =
        nonlinear_field_demo(geometry, params, 0.03, 0.0, 5000, 999, 20);
    CHECK(report.fitted_mean == doctest::Approx(stats.mean_g).epsilon(1e-14));
    CHECK(report.fitted_std == doctest::Approx(stats.std_g).epsilon(1e-14));
  }
}
