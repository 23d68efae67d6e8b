#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gradfit/gradfit.hpp"

namespace py = pybind11;
using namespace gradfit;

PYBIND11_MODULE(_core, m) {
  m.doc() = "W-state magnetic-field-gradient estimation toolkit (C++ core)";

  py::class_<ChainGeometry>(m, "ChainGeometry")
      .def(py::init<int, double, double>(), py::arg("n_atoms"), py::arg("spacing"),
           py::arg("x1") = 0.0)
      .def_readonly("n_atoms", &ChainGeometry::n_atoms)
      .def_readonly("spacing", &ChainGeometry::spacing)
      .def_readonly("x1", &ChainGeometry::x1)
      .def("position", &ChainGeometry::position, py::arg("j"));

  py::class_<ProbeParams>(m, "ProbeParams")
      .def(py::init([](double gamma, double time) {
             return ProbeParams{gamma, time};
           }),
           py::arg("gamma") = 1.0, py::arg("time") = 1.0)
      .def_readwrite("gamma", &ProbeParams::gamma)
      .def_readwrite("time", &ProbeParams::time);

  py::class_<FieldProfile>(m, "FieldProfile")
      .def(py::init([](std::vector<double> values, bool gauge_fixed) {
             return FieldProfile{std::move(values), gauge_fixed};
           }),
           py::arg("values"), py::arg("gauge_fixed") = false)
      .def_readwrite("values", &FieldProfile::values)
      .def_readwrite("gauge_fixed", &FieldProfile::gauge_fixed);

  py::class_<SingleExcitationState>(m, "SingleExcitationState")
      .def_readonly("amps", &SingleExcitationState::amps)
      .def("norm", &SingleExcitationState::norm);

  py::class_<SparseDiagonalState::Term>(m, "SparseTerm")
      .def_readonly("bits", &SparseDiagonalState::Term::bits)
      .def_readonly("amp", &SparseDiagonalState::Term::amp);

  py::class_<SparseDiagonalState>(m, "SparseDiagonalState")
      .def_readonly("terms", &SparseDiagonalState::terms);

  py::class_<DiagonalGenerator>(m, "DiagonalGenerator")
      .def_readonly("site_weights", &DiagonalGenerator::site_weights)
      .def("eigenvalue", &DiagonalGenerator::eigenvalue, py::arg("bits"));

  py::enum_<BasisKind>(m, "BasisKind")
      .value("fourier", BasisKind::fourier)
      .value("cascade", BasisKind::cascade)
      .value("custom", BasisKind::custom);

  py::class_<ProjectiveBasis>(m, "ProjectiveBasis")
      .def_readonly("rows", &ProjectiveBasis::rows)
      .def_readonly("label", &ProjectiveBasis::label);

  py::class_<OutcomeDistribution>(m, "OutcomeDistribution")
      .def_readonly("probs", &OutcomeDistribution::probs);

  py::class_<FisherMatrix>(m, "FisherMatrix")
      .def_readonly("entries", &FisherMatrix::entries)
      .def_readonly("singular", &FisherMatrix::singular);

  py::class_<OutcomeCounts>(m, "OutcomeCounts")
      .def(py::init([](std::vector<std::int64_t> counts) {
             OutcomeCounts oc;
             oc.total = 0;
             for (auto c : counts) oc.total += c;
             oc.counts = std::move(counts);
             return oc;
           }),
           py::arg("counts"))
      .def_readonly("counts", &OutcomeCounts::counts)
      .def_readonly("total", &OutcomeCounts::total);

  py::class_<GradientEstimate>(m, "GradientEstimate")
      .def_readonly("g_hat", &GradientEstimate::g_hat)
      .def_readonly("intercept", &GradientEstimate::intercept)
      .def_readonly("field_estimates", &GradientEstimate::field_estimates)
      .def_readonly("log_likelihood", &GradientEstimate::log_likelihood)
      .def_readonly("converged", &GradientEstimate::converged)
      .def_readonly("branch", &GradientEstimate::branch);

  py::class_<LinearFit>(m, "LinearFit")
      .def_readonly("gradient", &LinearFit::gradient)
      .def_readonly("intercept", &LinearFit::intercept);

  py::class_<EnsembleStats>(m, "EnsembleStats")
      .def_readonly("repeats", &EnsembleStats::repeats)
      .def_readonly("mean_g", &EnsembleStats::mean_g)
      .def_readonly("std_g", &EnsembleStats::std_g)
      .def_readonly("bias", &EnsembleStats::bias)
      .def_readonly("crb", &EnsembleStats::crb)
      .def_readonly("fi_crb", &EnsembleStats::fi_crb)
      .def_readonly("ratio_to_crb", &EnsembleStats::ratio_to_crb)
      .def_readonly("ratio_to_fi_crb", &EnsembleStats::ratio_to_fi_crb)
      .def_readonly("n_failed", &EnsembleStats::n_failed)
      .def_readonly("valid", &EnsembleStats::valid);

  py::class_<TrialConfig>(m, "TrialConfig")
      .def(py::init([](const ChainGeometry& geometry, const ProbeParams& params,
                       const FieldProfile& field, std::int64_t shots, std::uint64_t seed,
                       double prior_sign) {
             return TrialConfig{geometry, params, field, BasisKind::cascade,
                                shots, seed, prior_sign};
           }),
           py::arg("geometry"), py::arg("params"), py::arg("true_field"), py::arg("shots"),
           py::arg("seed"), py::arg("gradient_sign_prior") = +1.0);

  py::class_<ScalingRow>(m, "ScalingRow")
      .def_readonly("n", &ScalingRow::n)
      .def_readonly("shots", &ScalingRow::shots)
      .def_readonly("std_g", &ScalingRow::std_g)
      .def_readonly("crb", &ScalingRow::crb);

  py::class_<ScalingReport>(m, "ScalingReport")
      .def_readonly("rows", &ScalingReport::rows)
      .def_readonly("slope", &ScalingReport::slope)
      .def_readonly("intercept", &ScalingReport::intercept)
      .def_readonly("slope_ci", &ScalingReport::slope_ci);

  py::class_<StateComparison>(m, "StateComparison")
      .def_readonly("n", &StateComparison::n)
      .def_readonly("qfi_w", &StateComparison::qfi_w)
      .def_readonly("qfi_ghz", &StateComparison::qfi_ghz)
      .def_readonly("qfi_noon", &StateComparison::qfi_noon)
      .def_readonly("lagrange_bound", &StateComparison::lagrange_bound)
      .def_readonly("sigma_mean_field", &StateComparison::sigma_mean_field)
      .def_readonly("sigma_half_difference", &StateComparison::sigma_half_difference);

  py::class_<NonlinearDemoReport>(m, "NonlinearDemoReport")
      .def_readonly("base_gradient", &NonlinearDemoReport::base_gradient)
      .def_readonly("quadratic_coeff", &NonlinearDemoReport::quadratic_coeff)
      .def_readonly("lslf_projection", &NonlinearDemoReport::lslf_projection)
      .def_readonly("fitted_mean", &NonlinearDemoReport::fitted_mean)
      .def_readonly("fitted_std", &NonlinearDemoReport::fitted_std)
      .def_readonly("fitted_bias", &NonlinearDemoReport::fitted_bias)
      .def_readonly("single_a_mean", &NonlinearDemoReport::single_a_mean)
      .def_readonly("single_a_std", &NonlinearDemoReport::single_a_std)
      .def_readonly("single_a_bias", &NonlinearDemoReport::single_a_bias);

  // chain-state operations
  m.def("w_state", &w_state, py::arg("geometry"));
  m.def("evolve", &evolve, py::arg("state"), py::arg("field"), py::arg("params"));
  m.def("linear_field", &linear_field, py::arg("geometry"), py::arg("b1"), py::arg("gradient"));
  m.def("quadratic_field", &quadratic_field, py::arg("geometry"), py::arg("gradient"),
        py::arg("quadratic_coeff"));
  m.def("gauge_fix", &gauge_fix, py::arg("field"));
  m.def("mean_field", &mean_field, py::arg("field"));
  m.def("half_difference_field", &half_difference_field, py::arg("field"));
  m.def("ghz_state", &ghz_state, py::arg("n"));
  m.def("noon_state", &noon_state, py::arg("n"));
  m.def("site_generator", &site_generator, py::arg("n"), py::arg("site"), py::arg("params"));
  m.def("gradient_generator", &gradient_generator, py::arg("geometry"), py::arg("params"));

  // measurement
  m.def("fourier_basis", &fourier_basis, py::arg("n"));
  m.def("cascade_basis", &cascade_basis, py::arg("n"));
  m.def("outcome_distribution", &outcome_distribution, py::arg("state"), py::arg("basis"));
  m.def("prob_a_linear", &prob_a_linear, py::arg("n"), py::arg("params"), py::arg("spacing"),
        py::arg("gradient"));
  m.def("prob_b_linear", &prob_b_linear, py::arg("n"), py::arg("params"), py::arg("spacing"),
        py::arg("gradient"));
  m.def("prob_b_linear_small_angle", &prob_b_linear_small_angle, py::arg("n"),
        py::arg("params"), py::arg("spacing"), py::arg("gradient"));
  m.def("coherence_operator", &coherence_operator, py::arg("basis"));

  // fisher information
  m.def("fi_matrix_a_linear", &fi_matrix_a_linear, py::arg("n"), py::arg("params"));
  m.def("fi_matrix_b_origin", &fi_matrix_b_origin, py::arg("n"), py::arg("params"));
  m.def("qfi_matrix_w", &qfi_matrix_w, py::arg("n"), py::arg("params"));
  m.def("qfi_matrix_w_inverse", &qfi_matrix_w_inverse, py::arg("n"), py::arg("params"));
  m.def("field_generators", &field_generators, py::arg("n"), py::arg("params"));
  m.def("qfi_pure_diagonal",
        py::overload_cast<const SparseDiagonalState&, const std::vector<DiagonalGenerator>&>(
            &qfi_pure_diagonal),
        py::arg("state"), py::arg("generators"));
  m.def("qfi_pure_diagonal",
        py::overload_cast<const SingleExcitationState&, const std::vector<DiagonalGenerator>&>(
            &qfi_pure_diagonal),
        py::arg("state"), py::arg("generators"));
  m.def("qfi_single_w",
        [](int n, const ProbeParams& p, double spacing) {
          return qfi_single_w(n, p, spacing).value;
        },
        py::arg("n"), py::arg("params"), py::arg("spacing"));
  m.def("optimal_state_qfi_bound",
        [](const DiagonalGenerator& gen) { return optimal_state_qfi_bound(gen).value; },
        py::arg("generator"));
  m.def("fi_matrix_numeric",
        [](const std::function<Eigen::VectorXd(const FieldProfile&)>& model,
           const FieldProfile& field, double step) {
          const FieldModel wrapped = [&model](const FieldProfile& f) {
            OutcomeDistribution dist;
            dist.probs = model(f);
            return dist;
          };
          return fi_matrix_numeric(wrapped, field, step);
        },
        py::arg("model"), py::arg("field"), py::arg("step") = 1e-4);
  m.def("fi_single_numeric",
        [](const std::function<Eigen::VectorXd(double)>& model, double g, double step) {
          const ScalarModel wrapped = [&model](double gg) {
            OutcomeDistribution dist;
            dist.probs = model(gg);
            return dist;
          };
          return fi_single_numeric(wrapped, g, step).value;
        },
        py::arg("model"), py::arg("g"), py::arg("step") = 1e-4);

  // estimation
  m.def("sample_counts", &sample_counts, py::arg("dist"), py::arg("shots"), py::arg("seed"));
  m.def("lslf_coefficients", &lslf_coefficients, py::arg("geometry"));
  m.def("lslf_fit", &lslf_fit, py::arg("geometry"), py::arg("field_estimates"));
  m.def("crb_gradient", &crb_gradient, py::arg("n"), py::arg("params"), py::arg("spacing"),
        py::arg("shots"));
  m.def("mle_fields_cascade", &mle_fields_cascade, py::arg("counts"), py::arg("geometry"),
        py::arg("params"), py::arg("prior_sign") = +1.0);
  m.def("mle_fields_cascade_weighted", &mle_fields_cascade_weighted, py::arg("weights"),
        py::arg("geometry"), py::arg("params"), py::arg("prior_sign") = +1.0);
  m.def("estimate_gradient_single_a", &estimate_gradient_single_a, py::arg("counts"),
        py::arg("n"), py::arg("params"), py::arg("spacing"));
  m.def("estimate_gradient_single_b", &estimate_gradient_single_b, py::arg("counts"),
        py::arg("n"), py::arg("params"), py::arg("spacing"));
  m.def("trial_seed", &trial_seed, py::arg("master_seed"), py::arg("trial_index"));

  // experiments
  m.def("run_ensemble",
        [](const TrialConfig& config, int repeats) { return run_ensemble(config, repeats); },
        py::arg("config"), py::arg("repeats"));
  m.def("sweep_scaling",
        [](const std::vector<int>& n_list, std::int64_t shots, double phase_target,
           std::uint64_t seed, int repeats, bool analytic_only) {
          const ProbeParams params;
          const GradientRule rule = [phase_target](int n) {
            return phase_target / double(n - 1);
          };
          return sweep_scaling(n_list, shots, rule, seed, repeats, analytic_only, params, 1.0);
        },
        py::arg("n_list"), py::arg("shots"), py::arg("phase_target") = 0.2,
        py::arg("seed") = 0, py::arg("repeats") = 200, py::arg("analytic_only") = false);
  m.def("compare_states", &compare_states, py::arg("n"), py::arg("params"), py::arg("spacing"),
        py::arg("shots"));
  m.def("nonlinear_field_demo", &nonlinear_field_demo, py::arg("geometry"), py::arg("params"),
        py::arg("base_gradient"), py::arg("quadratic_coeff"), py::arg("shots"), py::arg("seed"),
        py::arg("repeats") = 200);

  m.attr("__version__") = "0.1.0";
}
