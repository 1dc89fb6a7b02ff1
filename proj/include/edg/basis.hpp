#pragma once

#include "edg/types.hpp"

#include <cstdint>

namespace edg {

// The measurement basis: for a pair p = (i,j) the basis element is the
// symmetric matrix with +1 at (i,i),(j,j) and -1 at (i,j),(j,i), so that
// <X, basis(p)> = X_ii + X_jj - 2 X_ij picks out one squared distance of
// the configuration X represents. The basis spans the symmetric matrices
// with zero row sums but is not orthogonal; its dual (via the inverse of
// the correlation matrix) has a closed form implemented below.

/// Number of index pairs L = n(n-1)/2.
inline std::int64_t num_pairs(int n) {
  return static_cast<std::int64_t>(n) * (n - 1) / 2;
}

void validate_pair(IndexPair p, int n);

/// Row-major upper-triangle position of p among all pairs: a bijection
/// onto [0, L). This enumeration is fixed; observation files refer to
/// pairs by (i,j) columns which map through it.
std::int64_t pair_index(IndexPair p, int n);

/// Inverse of pair_index.
IndexPair pair_at(std::int64_t k, int n);

/// <X, basis(p)> = X_ii + X_jj - 2 X_ij in O(1).
double basis_inner(const Matrix& x, IndexPair p);

/// Correlation of two basis elements: 4 if equal, 0 if index-disjoint,
/// 1 if they share exactly one index.
double corr_entry(IndexPair a, IndexPair b);

/// Entry of the closed-form inverse correlation matrix:
///   ((n-1)^2+1)/(2n^2)  if a == b
///   1/n^2               if disjoint
///   (4-2n)/(4n^2)       if exactly one shared index
double corr_inv_entry(IndexPair a, IndexPair b, int n);

// Dense verification objects. These cost O(n^2) to O(L^2) and exist for
// identity checks and coherence estimation, not solver paths; assembly
// is gated to n <= dense_limit.
inline constexpr int kDefaultDenseLimit = 64;

/// Dense basis element for p.
Matrix basis_matrix(IndexPair p, int n);

/// Dense dual basis element for p (requires n >= 3): the unique matrix v
/// with <v, basis(q)> = delta_{pq}. Symmetric with zero row sums.
Matrix dual_basis_matrix(IndexPair p, int n);

/// L x L correlation matrix of the basis.
Matrix corr_matrix(int n, int dense_limit = kDefaultDenseLimit);

/// Its inverse, assembled from corr_inv_entry.
Matrix corr_inverse_matrix(int n, int dense_limit = kDefaultDenseLimit);

/// A: component e of the result is <X, basis(pairs[e])>.
Vector measure(const Matrix& x, const ObservationSet& obs);

/// A applied to the factored candidate P P^T without forming it:
/// component e = ||P_i - P_j||^2.
Vector measure_factored(const Matrix& p, const ObservationSet& obs);

/// Adjoint A*: sum_e y_e basis(pairs[e]), accumulated sparsely.
Matrix measure_adjoint(const Vector& y, const ObservationSet& obs);

/// A*(y) P without materializing the n x n adjoint: row i accumulates
/// sum over incident observations of +/- y_e (P_i - P_j). O(mq).
Matrix measure_adjoint_apply(const Vector& y, const ObservationSet& obs,
                             const Matrix& p);

/// Sampling operator (L/m) sum_{e in obs} <X, basis(e)> dual(e).
/// Dense, for verification at small n (requires n >= 3).
Matrix sampling_operator(const Matrix& x, const ObservationSet& obs,
                         int dense_limit = kDefaultDenseLimit);

/// Restricted frame operator (L/m) sum_{e in obs} <X, basis(e)> basis(e).
Matrix frame_operator(const Matrix& x, const ObservationSet& obs);

}  // namespace edg
