#pragma once

#include "edg/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace edg {

struct CheckResult {
  std::string name;
  bool pass = false;
  double worst = 0.0;  // largest deviation seen (0 for exact checks)
  std::string detail;
};

/// Exact self-checks of the pair-basis operator algebra for each
/// n in [n_lo, n_hi]:
///   - duality of the closed-form dual basis against every basis element
///   - the dual equals its expansion through the inverse correlation matrix
///   - correlation matrix times its closed-form inverse is the identity
///   - extreme eigenvalues of the correlation matrix (2n with the all-ones
///     eigenvector at the top, at least 1 at the bottom)
///   - absolute row sums of the inverse equal 2 - 15/(2n) + 8/n^2
///   - sum of squared basis elements equals 2n I - 2 11^T (integer exact)
///   - two-sided norm bounds of basis and dual coefficient sequences on
///     random symmetric zero-row-sum matrices
std::vector<CheckResult> run_identity_checks(int n_lo = 3, int n_hi = 12,
                                             int random_trials = 100,
                                             std::uint64_t seed = 20240901);

/// Print one line per check; returns the number of failures.
int report_checks(const std::vector<CheckResult>& checks, std::ostream& out);

/// Random symmetric matrix with zero row sums (n >= 2), entries O(1).
Matrix random_zero_row_sum_symmetric(int n, std::uint64_t seed);

}  // namespace edg
