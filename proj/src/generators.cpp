#include "edg/generators.hpp"

#include "edg/io.hpp"
#include "edg/rng.hpp"

namespace edg {

PointCloud make_sphere(int n, std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("make_sphere: n must be >= 1");
  Rng rng(seed);
  Matrix coords(n, 3);
  for (int i = 0; i < n; ++i) {
    double x, y, z, norm;
    do {
      x = rng.normal();
      y = rng.normal();
      z = rng.normal();
      norm = std::sqrt(x * x + y * y + z * z);
    } while (norm < 1e-12);
    coords(i, 0) = x / norm;
    coords(i, 1) = y / norm;
    coords(i, 2) = z / norm;
  }
  return {std::move(coords)};
}

PointCloud make_gaussian(int n, int r, std::uint64_t seed) {
  if (n < 1 || r < 1)
    throw InvalidArgument("make_gaussian: need n >= 1 and r >= 1");
  Rng rng(seed);
  Matrix coords(n, r);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < r; ++c) coords(i, c) = rng.normal();
  return {std::move(coords)};
}

std::string DatasetSpec::label() const {
  switch (kind) {
    case Kind::kSphere: return "sphere:" + std::to_string(n);
    case Kind::kGaussian:
      return "gaussian:" + std::to_string(n) +
             (r > 0 ? ":" + std::to_string(r) : "");
    case Kind::kFile: return "file:" + path;
  }
  return {};
}

DatasetSpec parse_dataset(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw InvalidArgument("dataset '" + text +
                          "' is not sphere:N, gaussian:N[:R] or file:PATH");
  const std::string head = text.substr(0, colon);
  const std::string rest = text.substr(colon + 1);

  DatasetSpec spec;
  if (head == "file") {
    spec.kind = DatasetSpec::Kind::kFile;
    spec.path = rest;
    if (spec.path.empty())
      throw InvalidArgument("dataset 'file:' needs a path");
    return spec;
  }

  auto parse_int = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(s, &used);
      if (used != s.size() || v < 1) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw InvalidArgument("dataset '" + text + "': bad count '" + s + "'");
    }
  };

  if (head == "sphere") {
    spec.kind = DatasetSpec::Kind::kSphere;
    spec.n = parse_int(rest);
    spec.r = 3;
    return spec;
  }
  if (head == "gaussian") {
    spec.kind = DatasetSpec::Kind::kGaussian;
    const auto second = rest.find(':');
    if (second == std::string::npos) {
      spec.n = parse_int(rest);
    } else {
      spec.n = parse_int(rest.substr(0, second));
      spec.r = parse_int(rest.substr(second + 1));
    }
    return spec;
  }
  throw InvalidArgument("unknown dataset kind '" + head + "'");
}

PointCloud load_dataset(const DatasetSpec& spec, std::uint64_t seed,
                        int rank_override) {
  switch (spec.kind) {
    case DatasetSpec::Kind::kSphere:
      return make_sphere(spec.n, seed);
    case DatasetSpec::Kind::kGaussian: {
      const int r = spec.r > 0 ? spec.r : rank_override;
      if (r < 1)
        throw InvalidArgument(
            "gaussian dataset needs a rank (gaussian:N:R or a rank grid)");
      return make_gaussian(spec.n, r, seed);
    }
    case DatasetSpec::Kind::kFile:
      return read_point_cloud(spec.path);
  }
  throw InvalidArgument("unreachable dataset kind");
}

}  // namespace edg
