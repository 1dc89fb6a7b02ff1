// Command-line front end: single reconstructions, error-vs-rate tables,
// phase-transition grids, coherence reports and the operator self-check.

#include "edg/coherence.hpp"
#include "edg/experiments.hpp"
#include "edg/generators.hpp"
#include "edg/geometry.hpp"
#include "edg/io.hpp"
#include "edg/rng.hpp"
#include "edg/sampling.hpp"
#include "edg/solver.hpp"
#include "edg/verify.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <iostream>

namespace {

// Exit codes: 0 success, 2 configuration, 3 I/O, 4 solver divergence.
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitDiverged = 4;

namespace fs = std::filesystem;

struct CommonOptions {
  std::string output_dir = ".";
  std::uint64_t seed = 0;
  int threads = 1;
};

void add_solver_flags(CLI::App* cmd, edg::SolverConfig& cfg,
                      double& lambda_flag) {
  cmd->add_option("--q", cfg.q, "factor width (rank guess)");
  cmd->add_option("--tol", cfg.tol, "stopping tolerance");
  cmd->add_option("--max-iter", cfg.max_outer, "outer iteration cap");
  cmd->add_option("--bb-iter", cfg.bb_inner, "inner descent steps per round");
  cmd->add_option("--penalty", cfg.penalty, "quadratic penalty weight");
  cmd->add_option("--lambda", lambda_flag,
                  "noisy-path weight (default: 100 * sampling rate)");
  cmd->add_option("--init-scale", cfg.init_scale,
                  "scale of the random start");
  std::map<std::string, edg::StopRule> rules{
      {"reconciled", edg::StopRule::kReconciled},
      {"box", edg::StopRule::kBox},
      {"relative-energy", edg::StopRule::kRelativeEnergy}};
  cmd->add_option("--stop-rule", cfg.stop_rule, "stopping policy")
      ->transform(CLI::CheckedTransformer(rules, CLI::ignore_case));
}

std::string out_path(const CommonOptions& common, const std::string& name) {
  fs::create_directories(common.output_dir);
  return (fs::path(common.output_dir) / name).string();
}

int run_solve(const std::string& dataset, const std::string& obs_file,
              int obs_n, double rate, bool noisy, bool with_replacement,
              bool write_gram, edg::SolverConfig cfg,
              const CommonOptions& common) {
  using namespace edg;
  ObservationSet obs;
  std::unique_ptr<PointCloud> cloud;
  std::unique_ptr<GramMatrix> truth;
  nlohmann::json config;
  config["seed"] = common.seed;

  if (!obs_file.empty()) {
    obs = read_observations(obs_file, obs_n);
    config["observations"] = obs_file;
  } else {
    if (!(rate > 0.0 && rate <= 1.0))
      throw InvalidArgument("--rate must lie in (0, 1]");
    const DatasetSpec ds = parse_dataset(dataset);
    cloud = std::make_unique<PointCloud>(
        load_dataset(ds, derive_seed(common.seed, 0)));
    truth = std::make_unique<GramMatrix>(center_gram_from_points(*cloud));
    const SquaredDistanceMatrix dist = distance_matrix_from_points(*cloud);
    const int n = static_cast<int>(cloud->n());
    const auto m = std::max<std::int64_t>(
        1, std::llround(rate * static_cast<double>(num_pairs(n))));
    const auto pairs =
        sample_pairs(n, m, with_replacement, derive_seed(common.seed, 1));
    obs = observe(dist, pairs, with_replacement);
    config["dataset"] = dataset;
    config["rate"] = rate;
    config["with_replacement"] = with_replacement;
    config["sample_seed"] = derive_seed(common.seed, 1);
    if (noisy) {
      const NoiseModel model = derive_noise_model(obs);
      obs = corrupt(obs, model, derive_seed(common.seed, 2));
      config["noise"] = to_json(model);
      config["noise_seed"] = derive_seed(common.seed, 2);
    }
  }

  cfg.seed = derive_seed(common.seed, 3);
  const Index dim = cloud ? cloud->dim() : 3;
  const ReconstructionResult rec =
      reconstruct(obs, cfg, dim, noisy, truth.get());

  config["solver"] = to_json(cfg);
  config["embed_dim"] = dim;
  nlohmann::json report = to_json(rec.report);
  report["config"] = config;
  if (cloud)
    report["rmsd"] = procrustes_align(rec.points, *cloud).rmsd;

  std::vector<std::string> comments;
  comments.push_back("# generated by edg solve, seed=" +
                     std::to_string(common.seed));
  write_point_cloud(out_path(common, "points.csv"), rec.points, comments);
  if (write_gram)
    write_dense_matrix(out_path(common, "gram.csv"), rec.gram.values,
                       comments);
  write_json(out_path(common, "report.json"), report);

  std::cout << report.dump(2) << "\n";
  if (rec.report.diverged) return kExitDiverged;
  return 0;
}

int run_coherence(const std::string& dataset, int r, double beta,
                  bool simplified, int dense_limit,
                  const CommonOptions& common) {
  using namespace edg;
  if (!(beta > 1.0))
    throw InvalidArgument("--beta must exceed 1");
  const DatasetSpec ds = parse_dataset(dataset);
  const PointCloud cloud = load_dataset(ds, derive_seed(common.seed, 0));
  const GramMatrix gram = center_gram_from_points(cloud);
  if (r == 0) r = static_cast<int>(detect_rank(gram));

  const CoherenceReport rep =
      simplified ? coherence_simplified(gram, r, dense_limit)
                 : coherence_exact(gram, r, dense_limit);
  nlohmann::json j = to_json(rep);
  j["beta"] = beta;
  j["required_samples"] =
      sample_complexity(rep.n, rep.r, rep.nu, beta);
  j["mode"] = simplified ? "simplified" : "exact";
  j["dataset"] = dataset;
  j["seed"] = common.seed;
  write_json(out_path(common, "coherence.json"), j);
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "edg: reconstruct point configurations from partial pairwise "
      "squared distances by low-rank Gram completion"};
  app.require_subcommand(1);

  CommonOptions common;
  app.add_option("--output-dir", common.output_dir, "where files are written")
      ->capture_default_str();
  app.add_option("--seed", common.seed, "master seed")->capture_default_str();
  app.add_option("--threads", common.threads, "worker threads for batches")
      ->capture_default_str();

  // solve
  auto* solve = app.add_subcommand(
      "solve", "reconstruct one instance and write points/report");
  std::string dataset = "sphere:1002", obs_file;
  int obs_n = 0;
  double rate = 0.05;
  bool noisy = false, with_replacement = false, write_gram = false;
  edg::SolverConfig solver_cfg;
  double lambda_flag = 0.0;
  solve->add_option("--generator,--input", dataset,
                    "sphere:N | gaussian:N:R | file:PATH");
  solve->add_option("--obs", obs_file, "observation CSV (i,j,d2; 1-based)");
  solve->add_option("--n", obs_n, "point count for --obs files");
  solve->add_option("--rate", rate, "sampling fraction in (0, 1]");
  solve->add_flag("--noisy", noisy, "corrupt observations, penalized solve");
  solve->add_flag("--with-replacement", with_replacement,
                  "sample pairs with replacement");
  solve->add_flag("--gram", write_gram, "also write the completed Gram");
  add_solver_flags(solve, solver_cfg, lambda_flag);

  // table
  auto* table = app.add_subcommand(
      "table", "mean relative error per sampling rate");
  edg::ExperimentSpec table_spec;
  double table_lambda = 0.0;
  table->add_option("--generator,--input", table_spec.dataset,
                    "sphere:N | gaussian:N:R | file:PATH");
  table->add_option("--rates", table_spec.rates, "sampling fractions")
      ->required();
  table->add_option("--trials", table_spec.trials, "runs per rate");
  table->add_flag("--noisy", table_spec.noisy, "noisy observations");
  table->add_flag("--with-replacement", table_spec.with_replacement,
                  "sample pairs with replacement");
  table->add_option("--success-tol", table_spec.success_tol,
                    "relative-error threshold for success");
  add_solver_flags(table, table_spec.solver, table_lambda);

  // phase-diagram
  auto* phase = app.add_subcommand(
      "phase-diagram", "success probability over a rate x rank grid");
  edg::ExperimentSpec phase_spec;
  phase_spec.dataset = "gaussian:300";
  double phase_lambda = 0.0;
  phase->add_option("--generator", phase_spec.dataset, "gaussian:N");
  phase->add_option("--rates", phase_spec.rates, "sampling fractions")
      ->required();
  phase->add_option("--ranks", phase_spec.ranks, "cloud ranks")->required();
  phase->add_option("--trials", phase_spec.trials, "runs per cell");
  phase->add_flag("--noisy", phase_spec.noisy, "noisy observations");
  phase->add_option("--success-tol", phase_spec.success_tol,
                    "relative-error threshold for success");
  add_solver_flags(phase, phase_spec.solver, phase_lambda);

  // coherence
  auto* coher = app.add_subcommand(
      "coherence", "coherence statistics and the measurement-count bound");
  std::string coher_dataset = "gaussian:20:3";
  int coher_rank = 0;
  double beta = 2.0;
  bool simplified = false;
  int dense_limit = 40;
  coher->add_option("--generator,--input", coher_dataset,
                    "sphere:N | gaussian:N:R | file:PATH");
  coher->add_option("--rank", coher_rank,
                    "rank (0 = auto-detect by spectral gap)");
  coher->add_option("--beta", beta, "confidence exponent (> 1)");
  coher->add_flag("--simplified", simplified,
                  "Frobenius-bound estimator (larger n allowed)");
  coher->add_option("--dense-limit", dense_limit,
                    "override the n cap for the exact estimator");

  // verify
  auto* verify = app.add_subcommand(
      "verify", "run the operator-algebra self-checks");
  int verify_lo = 3, verify_hi = 12;
  verify->add_option("--n-min", verify_lo, "smallest n");
  verify->add_option("--n-max", verify_hi, "largest n");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (solve->parsed()) {
      if (solve->count("--lambda")) solver_cfg.lambda = lambda_flag;
      return run_solve(dataset, obs_file, obs_n, rate, noisy,
                       with_replacement, write_gram, solver_cfg, common);
    }
    if (table->parsed()) {
      if (table->count("--lambda")) table_spec.solver.lambda = table_lambda;
      table_spec.seed = common.seed;
      table_spec.threads = common.threads;
      const edg::TableResult result = edg::run_table(table_spec);
      edg::write_table_csv(out_path(common, "table.csv"), result);
      edg::write_trials_csv(out_path(common, "table_trials.csv"),
                            result.trials, result.config_lines);
      std::cout << edg::table_csv_text(result);
      return 0;
    }
    if (phase->parsed()) {
      if (phase->count("--lambda")) phase_spec.solver.lambda = phase_lambda;
      phase_spec.seed = common.seed;
      phase_spec.threads = common.threads;
      const edg::PhaseResult result = edg::run_phase_diagram(phase_spec);
      edg::write_phase_csv(out_path(common, "phase.csv"), result);
      edg::write_trials_csv(out_path(common, "phase_trials.csv"),
                            result.trials, result.config_lines);
      std::cout << edg::phase_csv_text(result);
      return 0;
    }
    if (coher->parsed())
      return run_coherence(coher_dataset, coher_rank, beta, simplified,
                           dense_limit, common);
    if (verify->parsed()) {
      const auto checks = edg::run_identity_checks(verify_lo, verify_hi);
      return edg::report_checks(checks, std::cout) == 0 ? 0 : 1;
    }
  } catch (const edg::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const edg::InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
