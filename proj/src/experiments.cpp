#include "edg/experiments.hpp"

#include "edg/geometry.hpp"
#include "edg/io.hpp"
#include "edg/rng.hpp"
#include "edg/sampling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

namespace edg {

void ExperimentSpec::validate(bool phase_mode) const {
  if (rates.empty()) throw InvalidArgument("experiment: no sampling rates");
  for (double r : rates)
    if (!(r > 0.0 && r <= 1.0))
      throw InvalidArgument("experiment: rates must lie in (0, 1]");
  if (trials < 1) throw InvalidArgument("experiment: trials must be >= 1");
  if (threads < 1) throw InvalidArgument("experiment: threads must be >= 1");
  if (!(success_tol > 0.0))
    throw InvalidArgument("experiment: success tolerance must be positive");
  const DatasetSpec ds = parse_dataset(dataset);
  if (phase_mode) {
    if (ranks.empty())
      throw InvalidArgument("phase diagram: no ranks given");
    if (ds.kind != DatasetSpec::Kind::kGaussian)
      throw InvalidArgument(
          "phase diagram: rank sweeps need a gaussian:N dataset");
    for (int r : ranks)
      if (r < 1 || r >= ds.n)
        throw InvalidArgument("phase diagram: rank must satisfy 1 <= r < n");
  }
  solver.validate();
}

namespace {

std::int64_t sample_count(double rate, int n) {
  const std::int64_t l = num_pairs(n);
  return std::max<std::int64_t>(1, std::llround(rate * static_cast<double>(l)));
}

// One reconstruction trial; never throws (failures land in .error).
TrialResult run_trial(const ExperimentSpec& spec, const PointCloud& cloud,
                      const SquaredDistanceMatrix& dist,
                      const GramMatrix& truth, double rate, int rank,
                      int trial, std::uint64_t trial_seed) {
  TrialResult res;
  res.rate = rate;
  res.rank = rank;
  res.trial = trial;
  res.seed = trial_seed;
  try {
    const int n = static_cast<int>(cloud.n());
    const auto pairs =
        sample_pairs(n, sample_count(rate, n), spec.with_replacement,
                     derive_seed(trial_seed, 1));
    ObservationSet obs = observe(dist, pairs, spec.with_replacement);
    if (spec.noisy) {
      const NoiseModel model = derive_noise_model(obs);
      obs = corrupt(obs, model, derive_seed(trial_seed, 2));
    }
    SolverConfig cfg = spec.solver;
    cfg.seed = derive_seed(trial_seed, 3);
    const ReconstructionResult rec =
        reconstruct(obs, cfg, cloud.dim(), spec.noisy, &truth);
    res.relative_error = rec.report.relative_error.value_or(0.0);
    res.rmsd = procrustes_align(rec.points, cloud).rmsd;
    res.iterations = rec.report.iterations;
    res.wall_time = rec.report.wall_time;
    res.converged = rec.report.converged;
    res.success = !rec.report.diverged &&
                  res.relative_error < spec.success_tol;
  } catch (const std::exception& e) {
    res.error = e.what();
    res.relative_error = std::numeric_limits<double>::infinity();
    res.success = false;
  }
  return res;
}

// Runs `count` jobs on spec.threads workers; job i writes only slot i of
// the result vector, so scheduling cannot change the output.
template <class Job>
void run_parallel(int threads, std::int64_t count, const Job& job) {
  if (threads <= 1 || count <= 1) {
    for (std::int64_t t = 0; t < count; ++t) job(t);
    return;
  }
  std::atomic<std::int64_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::int64_t t = next.fetch_add(1);
      if (t >= count) return;
      job(t);
    }
  };
  std::vector<std::thread> pool;
  const int k = static_cast<int>(
      std::min<std::int64_t>(threads, count));
  pool.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

std::vector<std::string> config_lines_for(const ExperimentSpec& spec,
                                          bool phase_mode) {
  std::ostringstream rates;
  for (std::size_t i = 0; i < spec.rates.size(); ++i)
    rates << (i ? "," : "") << format_double(spec.rates[i]);
  std::ostringstream ranks;
  for (std::size_t i = 0; i < spec.ranks.size(); ++i)
    ranks << (i ? "," : "") << spec.ranks[i];

  std::ostringstream solver;
  solver << "q=" << spec.solver.q << " penalty="
         << format_double(spec.solver.penalty) << " lambda="
         << (spec.solver.lambda ? format_double(*spec.solver.lambda)
                                : std::string("auto"))
         << " tol=" << format_double(spec.solver.tol)
         << " max_outer=" << spec.solver.max_outer
         << " bb_inner=" << spec.solver.bb_inner
         << " init_scale=" << format_double(spec.solver.init_scale);

  std::vector<std::string> lines;
  lines.push_back(std::string("# mode=") + (phase_mode ? "phase" : "table"));
  lines.push_back("# dataset=" + spec.dataset);
  lines.push_back("# rates=" + rates.str());
  if (phase_mode) lines.push_back("# ranks=" + ranks.str());
  lines.push_back("# trials=" + std::to_string(spec.trials));
  lines.push_back(std::string("# noisy=") + (spec.noisy ? "true" : "false"));
  lines.push_back("# seed=" + std::to_string(spec.seed));
  lines.push_back(std::string("# with_replacement=") +
                  (spec.with_replacement ? "true" : "false"));
  lines.push_back("# success_tol=" + format_double(spec.success_tol));
  lines.push_back("# solver: " + solver.str());
  lines.push_back("# trial_seed=seed^t; substreams sample=1 noise=2 init=3"
                  " cloud=4 (splitmix64)");
  return lines;
}

}  // namespace

TableResult run_table(const ExperimentSpec& spec) {
  spec.validate(/*phase_mode=*/false);
  const DatasetSpec ds = parse_dataset(spec.dataset);

  // The object under study is fixed across trials; only the sample, the
  // noise and the solver start vary.
  const PointCloud cloud = load_dataset(ds, derive_seed(spec.seed, 0));
  const SquaredDistanceMatrix dist = distance_matrix_from_points(cloud);
  const GramMatrix truth = center_gram_from_points(cloud);
  const int truth_rank = static_cast<int>(cloud.dim());

  const std::int64_t count =
      static_cast<std::int64_t>(spec.rates.size()) * spec.trials;
  TableResult out;
  out.trials.resize(static_cast<std::size_t>(count));
  run_parallel(spec.threads, count, [&](std::int64_t t) {
    const std::size_t rate_idx =
        static_cast<std::size_t>(t / spec.trials);
    const int trial = static_cast<int>(t % spec.trials);
    out.trials[static_cast<std::size_t>(t)] =
        run_trial(spec, cloud, dist, truth, spec.rates[rate_idx], truth_rank,
                  trial, spec.seed ^ static_cast<std::uint64_t>(t));
  });

  for (std::size_t rate_idx = 0; rate_idx < spec.rates.size(); ++rate_idx) {
    TableRow row;
    row.dataset = ds.label();
    row.rate = spec.rates[rate_idx];
    row.trials = spec.trials;
    std::vector<double> errors;
    double sum = 0.0;
    int successes = 0;
    for (int trial = 0; trial < spec.trials; ++trial) {
      const TrialResult& tr =
          out.trials[rate_idx * static_cast<std::size_t>(spec.trials) +
                     static_cast<std::size_t>(trial)];
      errors.push_back(tr.relative_error);
      sum += tr.relative_error;
      successes += tr.success ? 1 : 0;
    }
    row.mean_error = sum / spec.trials;
    row.median_error = median_of(errors);
    double sq = 0.0;
    for (double e : errors) sq += (e - row.mean_error) * (e - row.mean_error);
    row.stddev_error = std::sqrt(sq / spec.trials);
    row.success_rate = static_cast<double>(successes) / spec.trials;
    out.rows.push_back(std::move(row));
  }
  out.config_lines = config_lines_for(spec, false);
  return out;
}

PhaseResult run_phase_diagram(const ExperimentSpec& spec) {
  spec.validate(/*phase_mode=*/true);
  const DatasetSpec ds = parse_dataset(spec.dataset);

  const std::int64_t per_rate =
      static_cast<std::int64_t>(spec.ranks.size()) * spec.trials;
  const std::int64_t count =
      static_cast<std::int64_t>(spec.rates.size()) * per_rate;

  PhaseResult out;
  out.trials.resize(static_cast<std::size_t>(count));
  run_parallel(spec.threads, count, [&](std::int64_t t) {
    const std::size_t rate_idx = static_cast<std::size_t>(t / per_rate);
    const std::size_t rank_idx =
        static_cast<std::size_t>((t % per_rate) / spec.trials);
    const int trial = static_cast<int>(t % spec.trials);
    const std::uint64_t trial_seed =
        spec.seed ^ static_cast<std::uint64_t>(t);
    const int rank = spec.ranks[rank_idx];

    // Fresh instance per trial: the probability is over clouds and samples.
    const PointCloud cloud =
        load_dataset(ds, derive_seed(trial_seed, 4), rank);
    const SquaredDistanceMatrix dist = distance_matrix_from_points(cloud);
    const GramMatrix truth = center_gram_from_points(cloud);
    out.trials[static_cast<std::size_t>(t)] =
        run_trial(spec, cloud, dist, truth, spec.rates[rate_idx], rank,
                  trial, trial_seed);
  });

  for (std::size_t rate_idx = 0; rate_idx < spec.rates.size(); ++rate_idx) {
    for (std::size_t rank_idx = 0; rank_idx < spec.ranks.size(); ++rank_idx) {
      PhaseCell cell;
      cell.rate = spec.rates[rate_idx];
      cell.rank = spec.ranks[rank_idx];
      cell.trials = spec.trials;
      std::vector<double> errors;
      int successes = 0;
      const std::size_t base =
          (rate_idx * spec.ranks.size() + rank_idx) *
          static_cast<std::size_t>(spec.trials);
      for (int trial = 0; trial < spec.trials; ++trial) {
        const TrialResult& tr = out.trials[base + trial];
        errors.push_back(tr.relative_error);
        successes += tr.success ? 1 : 0;
      }
      cell.success_probability = static_cast<double>(successes) / spec.trials;
      cell.median_error = median_of(errors);
      out.cells.push_back(cell);
    }
  }
  out.config_lines = config_lines_for(spec, true);
  return out;
}

namespace {

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << text;
}

}  // namespace

std::string table_csv_text(const TableResult& result) {
  std::ostringstream out;
  for (const auto& line : result.config_lines) out << line << "\n";
  out << "dataset,rate,trials,mean_relative_error,median_relative_error,"
         "stddev_relative_error,success_rate\n";
  for (const TableRow& row : result.rows) {
    out << row.dataset << "," << format_double(row.rate) << "," << row.trials
        << "," << format_double(row.mean_error) << ","
        << format_double(row.median_error) << ","
        << format_double(row.stddev_error) << ","
        << format_double(row.success_rate) << "\n";
  }
  return out.str();
}

std::string phase_csv_text(const PhaseResult& result) {
  std::ostringstream out;
  for (const auto& line : result.config_lines) out << line << "\n";
  out << "rate,rank,trials,success_probability,median_relative_error\n";
  for (const PhaseCell& cell : result.cells) {
    out << format_double(cell.rate) << "," << cell.rank << "," << cell.trials
        << "," << format_double(cell.success_probability) << ","
        << format_double(cell.median_error) << "\n";
  }
  return out.str();
}

void write_table_csv(const std::string& path, const TableResult& result) {
  write_text(path, table_csv_text(result));
}

void write_phase_csv(const std::string& path, const PhaseResult& result) {
  write_text(path, phase_csv_text(result));
}

void write_trials_csv(const std::string& path,
                      const std::vector<TrialResult>& trials,
                      const std::vector<std::string>& config_lines) {
  std::ostringstream out;
  for (const auto& line : config_lines) out << line << "\n";
  out << "rate,rank,trial,seed,relative_error,rmsd,iterations,converged,"
         "success\n";
  for (const TrialResult& tr : trials) {
    out << format_double(tr.rate) << "," << tr.rank << "," << tr.trial << ","
        << tr.seed << "," << format_double(tr.relative_error) << ","
        << format_double(tr.rmsd) << "," << tr.iterations << ","
        << (tr.converged ? 1 : 0) << "," << (tr.success ? 1 : 0) << "\n";
  }
  write_text(path, out.str());
}

}  // namespace edg
