#pragma once

#include "edg/geometry.hpp"
#include "edg/rng.hpp"
#include "edg/types.hpp"

namespace edg::testing {

inline PointCloud random_cloud(int n, int d, std::uint64_t seed) {
  Rng rng(seed);
  Matrix coords(n, d);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < d; ++c) coords(i, c) = rng.normal();
  return {std::move(coords)};
}

/// Centered Gram of a random rank-r cloud; PSD with zero row sums.
inline GramMatrix random_gram(int n, int r, std::uint64_t seed) {
  return center_gram_from_points(random_cloud(n, r, seed));
}

inline Vector random_vector(Eigen::Index m, std::uint64_t seed) {
  Rng rng(seed);
  Vector v(m);
  for (Eigen::Index k = 0; k < m; ++k) v[k] = rng.normal();
  return v;
}

/// Random symmetric matrix, not necessarily zero-row-sum.
inline Matrix random_symmetric(int n, std::uint64_t seed) {
  Rng rng(seed);
  Matrix s(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double v = rng.normal();
      s(i, j) = v;
      s(j, i) = v;
    }
  return s;
}

}  // namespace edg::testing
