#pragma once

#include "edg/coherence.hpp"
#include "edg/sampling.hpp"
#include "edg/solver.hpp"
#include "edg/types.hpp"

#include <nlohmann/json_fwd.hpp>

#include <string>
#include <vector>

namespace edg {

/// Shortest decimal form that round-trips a double exactly.
std::string format_double(double v);

// CSV conventions: comma separated, '#' comment lines allowed at the top,
// an optional header row (detected by non-numeric cells). Writers emit
// round-trip-exact numbers.

/// One point per row, d numeric columns.
PointCloud read_point_cloud(const std::string& path);
void write_point_cloud(const std::string& path, const PointCloud& pts,
                       const std::vector<std::string>& comments = {});

/// Dense square matrix (Gram or squared-distance).
Matrix read_dense_matrix(const std::string& path);
void write_dense_matrix(const std::string& path, const Matrix& m,
                        const std::vector<std::string>& comments = {});

/// Observation file: columns i, j, d2 with 1-based indices; duplicate rows
/// permitted and meaningful. If n = 0 it is inferred from the largest
/// index (or taken from an "# n=..." comment written by write_observations).
ObservationSet read_observations(const std::string& path, int n = 0);
void write_observations(const std::string& path, const ObservationSet& obs,
                        const std::vector<std::string>& comments = {});

nlohmann::json to_json(const CoherenceReport& rep);
nlohmann::json to_json(const NoiseModel& model);
nlohmann::json to_json(const SolveReport& rep, bool include_trace = true);
nlohmann::json to_json(const SolverConfig& cfg);

void write_json(const std::string& path, const nlohmann::json& j);

}  // namespace edg
