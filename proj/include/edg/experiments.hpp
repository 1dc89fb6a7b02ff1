#pragma once

#include "edg/generators.hpp"
#include "edg/solver.hpp"
#include "edg/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace edg {

/// A batch of reconstruction trials over sampling rates (and ranks for
/// the phase diagram). Trial t of the stable enumeration (rate-major,
/// rank-minor, trial-minor) runs with seed = seed XOR t, so results do
/// not depend on how trials are scheduled across threads.
struct ExperimentSpec {
  std::string dataset = "sphere:1002";
  std::vector<double> rates;
  std::vector<int> ranks;  // phase-diagram only
  int trials = 10;
  bool noisy = false;
  SolverConfig solver;
  std::uint64_t seed = 0;
  int threads = 1;
  double success_tol = 1e-5;
  bool with_replacement = false;

  void validate(bool phase_mode) const;
};

struct TrialResult {
  double rate = 0.0;
  int rank = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  double relative_error = 0.0;
  double rmsd = 0.0;
  int iterations = 0;
  double wall_time = 0.0;
  bool converged = false;
  bool success = false;
  std::string error;  // nonempty when the trial itself failed
};

struct TableRow {
  std::string dataset;
  double rate = 0.0;
  int trials = 0;
  double mean_error = 0.0;
  double median_error = 0.0;
  double stddev_error = 0.0;
  double success_rate = 0.0;
};

struct PhaseCell {
  double rate = 0.0;
  int rank = 0;
  int trials = 0;
  double success_probability = 0.0;
  double median_error = 0.0;
};

struct TableResult {
  std::vector<TrialResult> trials;  // stable order
  std::vector<TableRow> rows;
  std::vector<std::string> config_lines;
};

struct PhaseResult {
  std::vector<TrialResult> trials;
  std::vector<PhaseCell> cells;
  std::vector<std::string> config_lines;
};

/// Mean relative errors per (dataset, rate). The point cloud is drawn once
/// from the master seed; per-trial randomness is the sample, the noise and
/// the solver start.
TableResult run_table(const ExperimentSpec& spec);

/// Success probability per (rate, rank) cell. Each trial redraws a rank-r
/// gaussian cloud, so the probability is over instances and samples.
PhaseResult run_phase_diagram(const ExperimentSpec& spec);

// CSV writers. Aggregate files carry the resolved configuration in '#'
// comments and contain no timing columns, so identical seeds produce
// byte-identical files at any thread count. Wall times live in the JSON
// reports and the in-memory TrialResult.
void write_table_csv(const std::string& path, const TableResult& result);
void write_phase_csv(const std::string& path, const PhaseResult& result);
void write_trials_csv(const std::string& path,
                      const std::vector<TrialResult>& trials,
                      const std::vector<std::string>& config_lines);

std::string table_csv_text(const TableResult& result);
std::string phase_csv_text(const PhaseResult& result);

}  // namespace edg
