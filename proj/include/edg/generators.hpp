#pragma once

#include "edg/types.hpp"

#include <cstdint>
#include <string>

namespace edg {

/// n points uniform on the unit sphere in R^3.
PointCloud make_sphere(int n, std::uint64_t seed);

/// n points iid standard normal in R^r.
PointCloud make_gaussian(int n, int r, std::uint64_t seed);

/// Dataset descriptor parsed from "sphere:N", "gaussian:N:R", "gaussian:N"
/// (rank supplied later, e.g. by a phase-diagram grid) or "file:PATH".
struct DatasetSpec {
  enum class Kind { kSphere, kGaussian, kFile } kind = Kind::kSphere;
  int n = 0;
  int r = 0;  // 0 = unspecified
  std::string path;

  std::string label() const;
};

DatasetSpec parse_dataset(const std::string& text);

/// Materialize the dataset. For generators the seed selects the draw; for
/// files it is ignored. rank_override replaces an unspecified gaussian rank.
PointCloud load_dataset(const DatasetSpec& spec, std::uint64_t seed,
                        int rank_override = 0);

}  // namespace edg
