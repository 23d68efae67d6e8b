// Command-line driver: probability tables, information matrices, Monte Carlo
// ensembles, scaling sweeps, and the verification suite. All outputs are
// deterministic for a fixed configuration and master seed.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gradfit/gradfit.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gradfit;

namespace {

struct CommonOpts {
  std::string out_dir = ".";
  double gamma = 1.0;
  double time = 1.0;
  double spacing = 1.0;
};

struct KeyValues {
  std::vector<std::pair<std::string, std::string>> items;

  void add(const std::string& key, const std::string& value) { items.emplace_back(key, value); }
  void add(const std::string& key, double value) { add(key, format_full(value)); }
  void add(const std::string& key, std::int64_t value) { add(key, std::to_string(value)); }

  std::uint64_t hash() const {
    std::string text;
    for (const auto& [k, v] : items) text += k + "=" + v + "\n";
    return fnv1a_hash(text);
  }
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--out", opts.out_dir, "output directory")
      ->envname("GRADFIT_OUT_DIR")
      ->capture_default_str();
  cmd->add_option("--gamma", opts.gamma, "gyromagnetic ratio")->capture_default_str();
  cmd->add_option("--time", opts.time, "evolution time")->capture_default_str();
  cmd->add_option("--spacing", opts.spacing, "atom spacing")->capture_default_str();
}

fs::path ensure_out_dir(const CommonOpts& opts) {
  fs::path dir(opts.out_dir);
  fs::create_directories(dir);
  return dir;
}

void write_failure_marker(const fs::path& dir, const std::string& message) {
  std::ofstream marker(dir / "FAILED");
  marker << message << "\n";
}

std::string matrix_csv(const fs::path& path, const Eigen::MatrixXd& m, std::uint64_t hash,
                       std::uint64_t seed) {
  std::vector<std::string> columns;
  for (int j = 0; j < m.cols(); ++j) columns.push_back("b" + std::to_string(j + 2));
  CsvWriter writer(path.string(), columns, hash, seed);
  for (int i = 0; i < m.rows(); ++i) {
    std::vector<std::string> row;
    for (int j = 0; j < m.cols(); ++j) row.push_back(format_full(m(i, j)));
    writer.add_row(row);
  }
  writer.write();
  return path.string();
}

// ---- probs ----------------------------------------------------------------

struct ProbsOpts {
  CommonOpts common;
  std::string basis = "a";
  int n = 2;
  double g = 0.0;
};

int cmd_probs(const ProbsOpts& opts) {
  const ProbeParams params{opts.common.gamma, opts.common.time};
  const ChainGeometry geometry(opts.n, opts.common.spacing);

  KeyValues kv;
  kv.add("cmd", "probs");
  kv.add("basis", opts.basis);
  kv.add("n", std::int64_t{opts.n});
  kv.add("g", opts.g);
  kv.add("gamma", params.gamma);
  kv.add("time", params.time);
  kv.add("spacing", geometry.spacing);

  const bool basis_a = (opts.basis == "a");
  const OutcomeDistribution closed =
      basis_a ? prob_a_linear(opts.n, params, geometry.spacing, opts.g)
              : prob_b_linear(opts.n, params, geometry.spacing, opts.g);
  const ProjectiveBasis basis = basis_a ? fourier_basis(opts.n) : cascade_basis(opts.n);
  const OutcomeDistribution oracle = outcome_distribution(
      evolve(w_state(geometry), linear_field(geometry, 0.0, opts.g), params), basis);

  const fs::path dir = ensure_out_dir(opts.common);
  const fs::path path =
      dir / ("probs_" + opts.basis + "_n" + std::to_string(opts.n) + ".csv");
  CsvWriter writer(path.string(), {"xi", "p_closed_form", "p_oracle"}, kv.hash(), 0);
  for (int xi = 0; xi < opts.n; ++xi) {
    writer.add_row({std::to_string(xi), format_full(closed.probs[xi]),
                    format_full(oracle.probs[xi])});
  }
  writer.write();
  std::cout << "wrote " << path.string() << "\n";
  return 0;
}

// ---- fisher / qfi ----------------------------------------------------------

struct FisherOpts {
  CommonOpts common;
  std::string basis = "b";
  int n = 3;
  double g = 1e-3;
  double step = 1e-4;
};

int cmd_fisher(const FisherOpts& opts) {
  const ProbeParams params{opts.common.gamma, opts.common.time};
  const ChainGeometry geometry(opts.n, opts.common.spacing);

  KeyValues kv;
  kv.add("cmd", "fisher");
  kv.add("basis", opts.basis);
  kv.add("n", std::int64_t{opts.n});
  kv.add("g", opts.g);
  kv.add("step", opts.step);
  kv.add("gamma", params.gamma);
  kv.add("time", params.time);
  kv.add("spacing", geometry.spacing);
  const std::uint64_t hash = kv.hash();

  const bool basis_a = (opts.basis == "a");
  const FisherMatrix closed =
      basis_a ? fi_matrix_a_linear(opts.n, params) : fi_matrix_b_origin(opts.n, params);
  const ProjectiveBasis basis = basis_a ? fourier_basis(opts.n) : cascade_basis(opts.n);
  const FieldModel model = [&](const FieldProfile& f) {
    return outcome_distribution(evolve(w_state(geometry), f, params), basis);
  };
  const FisherMatrix numeric =
      fi_matrix_numeric(model, linear_field(geometry, 0.0, opts.g), opts.step);

  const fs::path dir = ensure_out_dir(opts.common);
  const std::string stem = "fisher_" + opts.basis + "_n" + std::to_string(opts.n);
  matrix_csv(dir / (stem + "_closed.csv"), closed.entries, hash, 0);
  matrix_csv(dir / (stem + "_numeric.csv"), numeric.entries, hash, 0);

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(closed.entries);
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(closed.entries);
  const auto& sv = svd.singularValues();
  CsvWriter summary((dir / (stem + "_summary.csv")).string(), {"name", "value"}, hash, 0);
  summary.add_row({"n", std::to_string(opts.n)});
  summary.add_row({"basis", opts.basis});
  summary.add_row({"singular_flag", closed.singular ? "1" : "0"});
  summary.add_row({"sv_ratio", format_full(sv(sv.size() - 1) / sv(0))});
  for (int i = 0; i < eig.eigenvalues().size(); ++i) {
    summary.add_row({"eigenvalue_" + std::to_string(i), format_full(eig.eigenvalues()[i])});
  }
  summary.write();
  std::cout << "wrote " << (dir / (stem + "_summary.csv")).string()
            << (closed.singular ? " (singular)" : "") << "\n";
  return 0;
}

struct QfiOpts {
  CommonOpts common;
  int n = 3;
  std::string state;  // empty = multi-parameter matrix; w|ghz|noon = scalar
};

int cmd_qfi(const QfiOpts& opts) {
  const ProbeParams params{opts.common.gamma, opts.common.time};
  const ChainGeometry geometry(opts.n, opts.common.spacing);

  KeyValues kv;
  kv.add("cmd", "qfi");
  kv.add("n", std::int64_t{opts.n});
  kv.add("state", opts.state.empty() ? "matrix" : opts.state);
  kv.add("gamma", params.gamma);
  kv.add("time", params.time);
  kv.add("spacing", geometry.spacing);
  const std::uint64_t hash = kv.hash();

  const fs::path dir = ensure_out_dir(opts.common);
  if (opts.state.empty()) {
    matrix_csv(dir / ("qfi_n" + std::to_string(opts.n) + ".csv"),
               qfi_matrix_w(opts.n, params).entries, hash, 0);
    matrix_csv(dir / ("qfi_inverse_n" + std::to_string(opts.n) + ".csv"),
               qfi_matrix_w_inverse(opts.n, params), hash, 0);
    std::cout << "wrote qfi and inverse matrices for n=" << opts.n << "\n";
    return 0;
  }

  const std::vector<DiagonalGenerator> gens{gradient_generator(geometry, params)};
  double value = 0.0;
  if (opts.state == "w") {
    value = qfi_pure_diagonal(w_state(geometry), gens).entries(0, 0);
  } else if (opts.state == "ghz") {
    value = qfi_pure_diagonal(ghz_state(opts.n), gens).entries(0, 0);
  } else if (opts.state == "noon") {
    value = qfi_pure_diagonal(noon_state(opts.n), gens).entries(0, 0);
  } else {
    throw std::invalid_argument("unknown state: " + opts.state);
  }
  const fs::path path = dir / ("qfi_" + opts.state + "_n" + std::to_string(opts.n) + ".csv");
  CsvWriter writer(path.string(), {"name", "value"}, hash, 0);
  writer.add_row({"qfi_" + opts.state, format_full(value)});
  writer.add_row({"lagrange_bound", format_full(optimal_state_qfi_bound(gens[0]).value)});
  writer.write();
  std::cout << "qfi(" << opts.state << ", n=" << opts.n << ") = " << format_short(value)
            << "\n";
  return 0;
}

// ---- simulate / sweep / verify ---------------------------------------------

struct SimulateOpts {
  CommonOpts common;
  int n = 8;
  double g = 0.05;
  std::int64_t shots = 100000;
  int repeats = 200;
  std::uint64_t seed = 0;
  double prior_sign = +1.0;
};

int cmd_simulate(const SimulateOpts& opts) {
  const ProbeParams params{opts.common.gamma, opts.common.time};
  const ChainGeometry geometry(opts.n, opts.common.spacing);

  KeyValues kv;
  kv.add("cmd", "simulate");
  kv.add("n", std::int64_t{opts.n});
  kv.add("g", opts.g);
  kv.add("shots", opts.shots);
  kv.add("repeats", std::int64_t{opts.repeats});
  kv.add("seed", std::int64_t(opts.seed));
  kv.add("prior_sign", opts.prior_sign);
  kv.add("gamma", params.gamma);
  kv.add("time", params.time);
  kv.add("spacing", geometry.spacing);
  const std::uint64_t hash = kv.hash();

  TrialConfig config{geometry,          params,     linear_field(geometry, 0.0, opts.g),
                     BasisKind::cascade, opts.shots, opts.seed,
                     opts.prior_sign};
  std::vector<TrialRecord> log;
  const EnsembleStats stats = run_ensemble(config, opts.repeats, &log);

  const fs::path dir = ensure_out_dir(opts.common);
  CsvWriter stats_csv((dir / "simulate_stats.csv").string(),
                      {"repeats", "mean_g", "std_g", "bias", "crb", "fi_crb", "ratio_to_crb",
                       "ratio_to_fi_crb", "n_failed", "valid"},
                      hash, opts.seed);
  stats_csv.add_row({std::to_string(stats.repeats), format_short(stats.mean_g),
                     format_short(stats.std_g), format_short(stats.bias),
                     format_short(stats.crb), format_short(stats.fi_crb),
                     format_short(stats.ratio_to_crb), format_short(stats.ratio_to_fi_crb),
                     std::to_string(stats.n_failed), stats.valid ? "1" : "0"});
  stats_csv.write();

  CsvWriter trials_csv((dir / "simulate_trials.csv").string(),
                       {"trial", "seed", "g_hat", "log_likelihood", "converged"}, hash,
                       opts.seed);
  for (const auto& rec : log) {
    trials_csv.add_row({std::to_string(rec.index), std::to_string(rec.seed),
                        format_full(rec.g_hat), format_full(rec.log_likelihood),
                        rec.converged ? "1" : "0"});
  }
  trials_csv.write();

  std::cout << "std " << format_short(stats.std_g) << ", ratio_to_crb "
            << format_short(stats.ratio_to_crb) << ", ratio_to_fi_crb "
            << format_short(stats.ratio_to_fi_crb) << ", failed " << stats.n_failed << "/"
            << stats.repeats << "\n";
  if (!stats.valid) {
    write_failure_marker(dir, "ensemble invalid: non-convergence above 5%");
    return 1;
  }
  return 0;
}

struct SweepOpts {
  CommonOpts common;
  std::vector<int> n_list = {8, 16, 32, 64};
  std::int64_t shots = 100000;
  int repeats = 200;
  std::uint64_t seed = 0;
  bool analytic_only = false;
  double phase_target = 0.2;  // 2*gta*(N-1)*G/2 held constant across N
};

int cmd_sweep(const SweepOpts& opts) {
  const ProbeParams params{opts.common.gamma, opts.common.time};

  KeyValues kv;
  kv.add("cmd", "sweep");
  std::string ns;
  for (int n : opts.n_list) ns += std::to_string(n) + ";";
  kv.add("n_list", ns);
  kv.add("shots", opts.shots);
  kv.add("repeats", std::int64_t{opts.repeats});
  kv.add("seed", std::int64_t(opts.seed));
  kv.add("analytic_only", std::int64_t{opts.analytic_only ? 1 : 0});
  kv.add("phase_target", opts.phase_target);
  kv.add("gamma", params.gamma);
  kv.add("time", params.time);
  kv.add("spacing", opts.common.spacing);
  const std::uint64_t hash = kv.hash();

  const double gta = params.gamma * params.time * opts.common.spacing;
  const double target = opts.phase_target;
  const GradientRule rule = [gta, target](int n) { return target / (gta * (n - 1)); };
  const ScalingReport report = sweep_scaling(opts.n_list, opts.shots, rule, opts.seed,
                                             opts.repeats, opts.analytic_only, params,
                                             opts.common.spacing);

  const fs::path dir = ensure_out_dir(opts.common);
  CsvWriter csv((dir / "sweep.csv").string(), {"n", "shots", "std_g", "crb"}, hash, opts.seed);
  std::vector<double> xs, std_ys, crb_ys;
  for (const auto& row : report.rows) {
    csv.add_row({std::to_string(row.n), std::to_string(row.shots), format_full(row.std_g),
                 format_full(row.crb)});
    xs.push_back(row.n);
    std_ys.push_back(row.std_g);
    crb_ys.push_back(row.crb);
  }
  csv.write();
  write_series((dir / "sweep_std.dat").string(), xs, std_ys, hash, opts.seed);
  write_series((dir / "sweep_crb.dat").string(), xs, crb_ys, hash, opts.seed);

  json manifest;
  manifest["config_hash"] = hash_hex(hash);
  manifest["seed"] = opts.seed;
  manifest["slope"] = report.slope;
  manifest["intercept"] = report.intercept;
  manifest["slope_ci"] = report.slope_ci;
  manifest["analytic_only"] = report.analytic_only;
  manifest["series"] = {{"std", "sweep_std.dat"}, {"crb", "sweep_crb.dat"}};
  manifest["table"] = "sweep.csv";
  std::ofstream mf(dir / "sweep_manifest.json");
  mf << manifest.dump(2) << "\n";

  std::cout << "slope " << format_short(report.slope) << " +- "
            << format_short(report.slope_ci) << "\n";
  return 0;
}

int cmd_verify() {
  const auto results = run_verification(std::cout);
  return all_passed(results) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"W-state magnetic-field-gradient estimation toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "configuration file (ini sections per subcommand)");
  app.allow_config_extras(CLI::config_extras_mode::error);

  ProbsOpts probs_opts;
  auto* probs = app.add_subcommand("probs", "outcome probability tables");
  add_common(probs, probs_opts.common);
  probs->add_option("--basis", probs_opts.basis, "a (fourier) or b (cascade)")
      ->check(CLI::IsMember({"a", "b"}))
      ->capture_default_str();
  probs->add_option("--n", probs_opts.n, "chain size")->check(CLI::Range(2, 4096));
  probs->add_option("--g", probs_opts.g, "field gradient")->capture_default_str();

  FisherOpts fisher_opts;
  auto* fisher = app.add_subcommand("fisher", "classical information matrices");
  add_common(fisher, fisher_opts.common);
  fisher->add_option("--basis", fisher_opts.basis, "a or b")
      ->check(CLI::IsMember({"a", "b"}))
      ->capture_default_str();
  fisher->add_option("--n", fisher_opts.n, "chain size")->check(CLI::Range(2, 512));
  fisher->add_option("--g", fisher_opts.g, "gradient of the evaluation field")
      ->capture_default_str();
  fisher->add_option("--step", fisher_opts.step, "finite-difference step")
      ->capture_default_str();

  QfiOpts qfi_opts;
  auto* qfi = app.add_subcommand("qfi", "quantum information matrices and state values");
  add_common(qfi, qfi_opts.common);
  qfi->add_option("--n", qfi_opts.n, "chain size")->check(CLI::Range(2, 512));
  qfi->add_option("--state", qfi_opts.state, "w, ghz or noon (scalar gradient qfi)")
      ->check(CLI::IsMember({"w", "ghz", "noon"}));

  SimulateOpts sim_opts;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo ensemble against the bounds");
  add_common(simulate, sim_opts.common);
  simulate->add_option("--n", sim_opts.n, "chain size")->check(CLI::Range(2, 256));
  simulate->add_option("--g", sim_opts.g, "true gradient")->capture_default_str();
  simulate->add_option("--shots", sim_opts.shots, "shots per trial")->check(CLI::PositiveNumber);
  simulate->add_option("--repeats", sim_opts.repeats, "number of trials")
      ->check(CLI::Range(2, 1000000));
  simulate->add_option("--seed", sim_opts.seed, "master seed")->capture_default_str();
  simulate->add_option("--prior-sign", sim_opts.prior_sign, "gradient sign prior")
      ->capture_default_str();

  SweepOpts sweep_opts;
  auto* sweep = app.add_subcommand("sweep", "Heisenberg-scaling sweep over chain sizes");
  add_common(sweep, sweep_opts.common);
  sweep->add_option("--n", sweep_opts.n_list, "chain sizes")->delimiter(',');
  sweep->add_option("--shots", sweep_opts.shots, "shots per trial")->check(CLI::PositiveNumber);
  sweep->add_option("--repeats", sweep_opts.repeats, "trials per size")
      ->check(CLI::Range(2, 1000000));
  sweep->add_option("--seed", sweep_opts.seed, "master seed")->capture_default_str();
  sweep->add_flag("--analytic-only", sweep_opts.analytic_only, "CRB rows only, no sampling");
  sweep->add_option("--phase-target", sweep_opts.phase_target,
                    "largest evolved phase held constant across sizes")
      ->capture_default_str();

  auto* verify = app.add_subcommand("verify", "run the acceptance criteria");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (probs->parsed()) return cmd_probs(probs_opts);
    if (fisher->parsed()) return cmd_fisher(fisher_opts);
    if (qfi->parsed()) return cmd_qfi(qfi_opts);
    if (simulate->parsed()) return cmd_simulate(sim_opts);
    if (sweep->parsed()) return cmd_sweep(sweep_opts);
    if (verify->parsed()) return cmd_verify();
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    try {
      fs::path dir(".");
      if (probs->parsed()) dir = probs_opts.common.out_dir;
      if (fisher->parsed()) dir = fisher_opts.common.out_dir;
      if (qfi->parsed()) dir = qfi_opts.common.out_dir;
      if (simulate->parsed()) dir = sim_opts.common.out_dir;
      if (sweep->parsed()) dir = sweep_opts.common.out_dir;
      write_failure_marker(dir, e.what());
    } catch (...) {
    }
    return 1;
  }
  return 2;
}
