#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace edg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Thrown on invalid inputs (bad shapes, out-of-range indices, bad config).
class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown on file/parse problems; message carries the offending line.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// n points in d-dimensional space, one point per row.
struct PointCloud {
  Matrix coords;

  Index n() const { return coords.rows(); }
  Index dim() const { return coords.cols(); }
};

/// Symmetric hollow matrix of squared pairwise distances.
struct SquaredDistanceMatrix {
  Matrix values;

  Index n() const { return values.rows(); }
};

/// Inner-product matrix of centered points: symmetric, zero row sums,
/// positive semidefinite up to tolerance.
struct GramMatrix {
  Matrix values;

  Index n() const { return values.rows(); }
};

/// Unordered pair of point indices, stored 0-based with i < j.
/// File formats and logs print these 1-based.
struct IndexPair {
  int i = 0;
  int j = 0;

  friend bool operator==(const IndexPair&, const IndexPair&) = default;
};

/// Ordered multiset of observed pairs with their squared-distance values.
/// Duplicates are allowed and meaningful when sampled with replacement.
struct ObservationSet {
  int n = 0;
  std::vector<IndexPair> pairs;
  Vector values;
  bool with_replacement = false;

  Index size() const { return static_cast<Index>(pairs.size()); }
};

void validate(const PointCloud& pts);
void validate(const SquaredDistanceMatrix& d, double tol = 1e-9);
void validate(const ObservationSet& obs);

}  // namespace edg
