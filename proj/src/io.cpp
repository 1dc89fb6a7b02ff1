#include "edg/io.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace edg {

std::string format_double(double v) {
  char buf[64];
  // Shortest representation that parses back to the same bits.
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  return buf;
}

namespace {

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    const auto first = cell.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
      cells.emplace_back();
      continue;
    }
    const auto last = cell.find_last_not_of(" \t\r");
    cells.push_back(cell.substr(first, last - first + 1));
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

struct CsvTable {
  std::vector<std::vector<std::string>> rows;  // data rows only
  std::vector<std::size_t> line_numbers;       // 1-based, per data row
  std::vector<std::string> comments;
  bool had_header = false;
};

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  CsvTable table;
  std::string line;
  std::size_t lineno = 0;
  bool first_data_row = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      table.comments.push_back(line);
      continue;
    }
    auto cells = split_csv_row(line);
    if (first_data_row) {
      first_data_row = false;
      double ignored;
      const bool numeric = std::all_of(
          cells.begin(), cells.end(),
          [&](const std::string& c) { return parse_double(c, ignored); });
      if (!numeric) {
        table.had_header = true;
        continue;  // header row
      }
    }
    table.rows.push_back(std::move(cells));
    table.line_numbers.push_back(lineno);
  }
  return table;
}

[[noreturn]] void bad_row(const std::string& path, std::size_t lineno,
                          const std::string& why) {
  throw IoError(path + ":" + std::to_string(lineno) + ": " + why);
}

Matrix rows_to_matrix(const CsvTable& table, const std::string& path) {
  if (table.rows.empty()) throw IoError(path + ": no data rows");
  const std::size_t cols = table.rows.front().size();
  Matrix m(static_cast<Index>(table.rows.size()), static_cast<Index>(cols));
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if (row.size() != cols)
      bad_row(path, table.line_numbers[r],
              "expected " + std::to_string(cols) + " columns, found " +
                  std::to_string(row.size()));
    for (std::size_t c = 0; c < cols; ++c) {
      double v;
      if (!parse_double(row[c], v))
        bad_row(path, table.line_numbers[r],
                "cannot parse '" + row[c] + "' as a number");
      m(static_cast<Index>(r), static_cast<Index>(c)) = v;
    }
  }
  return m;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  return out;
}

void write_comments(std::ofstream& out,
                    const std::vector<std::string>& comments) {
  for (const auto& c : comments)
    out << (c.rfind('#', 0) == 0 ? "" : "# ") << c << "\n";
}

}  // namespace

PointCloud read_point_cloud(const std::string& path) {
  PointCloud pts{rows_to_matrix(read_csv(path), path)};
  validate(pts);
  return pts;
}

void write_point_cloud(const std::string& path, const PointCloud& pts,
                       const std::vector<std::string>& comments) {
  auto out = open_out(path);
  write_comments(out, comments);
  for (Index c = 0; c < pts.dim(); ++c)
    out << (c ? "," : "") << "x" << c;
  out << "\n";
  for (Index r = 0; r < pts.n(); ++r) {
    for (Index c = 0; c < pts.dim(); ++c)
      out << (c ? "," : "") << format_double(pts.coords(r, c));
    out << "\n";
  }
}

Matrix read_dense_matrix(const std::string& path) {
  return rows_to_matrix(read_csv(path), path);
}

void write_dense_matrix(const std::string& path, const Matrix& m,
                        const std::vector<std::string>& comments) {
  auto out = open_out(path);
  write_comments(out, comments);
  for (Index c = 0; c < m.cols(); ++c) out << (c ? "," : "") << "c" << c;
  out << "\n";
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c)
      out << (c ? "," : "") << format_double(m(r, c));
    out << "\n";
  }
}

ObservationSet read_observations(const std::string& path, int n) {
  const CsvTable table = read_csv(path);
  bool with_replacement = false;
  for (const auto& c : table.comments) {
    if (c.find("n=") != std::string::npos && n == 0) {
      const auto pos = c.find("n=");
      n = std::atoi(c.c_str() + pos + 2);
    }
    if (c.find("with_replacement=true") != std::string::npos)
      with_replacement = true;
  }

  ObservationSet obs;
  obs.with_replacement = with_replacement;
  obs.pairs.reserve(table.rows.size());
  obs.values.resize(static_cast<Index>(table.rows.size()));
  int max_index = 0;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if (row.size() != 3)
      bad_row(path, table.line_numbers[r], "expected columns i,j,d2");
    double di, dj, d2;
    if (!parse_double(row[0], di) || !parse_double(row[1], dj) ||
        !parse_double(row[2], d2))
      bad_row(path, table.line_numbers[r], "cannot parse observation row");
    int i = static_cast<int>(di), j = static_cast<int>(dj);
    if (i < 1 || j < 1 || i == j)
      bad_row(path, table.line_numbers[r],
              "indices must be distinct and 1-based");
    if (i > j) std::swap(i, j);
    obs.pairs.push_back({i - 1, j - 1});
    obs.values[static_cast<Index>(r)] = d2;
    max_index = std::max(max_index, j);
  }
  obs.n = n > 0 ? n : max_index;
  validate(obs);
  return obs;
}

void write_observations(const std::string& path, const ObservationSet& obs,
                        const std::vector<std::string>& comments) {
  auto out = open_out(path);
  out << "# n=" << obs.n << "\n";
  out << "# with_replacement=" << (obs.with_replacement ? "true" : "false")
      << "\n";
  write_comments(out, comments);
  out << "i,j,d2\n";
  for (Index k = 0; k < obs.size(); ++k) {
    const IndexPair p = obs.pairs[static_cast<std::size_t>(k)];
    out << (p.i + 1) << "," << (p.j + 1) << ","
        << format_double(obs.values[k]) << "\n";
  }
}

nlohmann::json to_json(const CoherenceReport& rep) {
  return {{"nu_w", rep.nu_w}, {"nu_v", rep.nu_v},
          {"nu_joint", rep.nu_joint}, {"nu", rep.nu},
          {"n", rep.n},       {"r", rep.r}};
}

nlohmann::json to_json(const NoiseModel& model) {
  return {{"mu", model.mu},
          {"sigma", model.sigma},
          {"clamp",
           model.clamp == ClampPolicy::kClampToZero ? "clamp_to_zero"
                                                    : "reject_and_redraw"}};
}

nlohmann::json to_json(const SolverConfig& cfg) {
  nlohmann::json j = {{"q", cfg.q},
                      {"penalty", cfg.penalty},
                      {"tol", cfg.tol},
                      {"max_outer", cfg.max_outer},
                      {"bb_inner", cfg.bb_inner},
                      {"seed", cfg.seed},
                      {"init_scale", cfg.init_scale},
                      {"divergence_factor", cfg.divergence_factor}};
  j["lambda"] = cfg.lambda ? nlohmann::json(*cfg.lambda)
                           : nlohmann::json("auto");
  switch (cfg.stop_rule) {
    case StopRule::kReconciled: j["stop_rule"] = "reconciled"; break;
    case StopRule::kBox: j["stop_rule"] = "box"; break;
    case StopRule::kRelativeEnergy: j["stop_rule"] = "relative_energy"; break;
  }
  return j;
}

nlohmann::json to_json(const SolveReport& rep, bool include_trace) {
  nlohmann::json j = {{"iterations", rep.iterations},
                      {"converged", rep.converged},
                      {"diverged", rep.diverged},
                      {"status", rep.status},
                      {"wall_time", rep.wall_time}};
  if (rep.resolved_lambda > 0.0) j["resolved_lambda"] = rep.resolved_lambda;
  if (rep.relative_error) j["relative_error"] = *rep.relative_error;
  if (include_trace) {
    nlohmann::json trace = nlohmann::json::array();
    for (const EnergyPoint& e : rep.energy_trace)
      trace.push_back({{"total", e.total}, {"feasibility", e.feasibility}});
    j["energy_trace"] = std::move(trace);
  }
  return j;
}

void write_json(const std::string& path, const nlohmann::json& j) {
  auto out = open_out(path);
  out << j.dump(2) << "\n";
}

}  // namespace edg
