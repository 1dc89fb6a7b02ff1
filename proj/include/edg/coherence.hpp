#pragma once

#include "edg/types.hpp"

#include <cstdint>

namespace edg {

/// Column space of a rank-r positive semidefinite matrix, carried as an
/// n x r matrix with orthonormal columns ordered by descending eigenvalue.
struct TangentSpace {
  Matrix u;

  Index n() const { return u.rows(); }
  Index rank() const { return u.cols(); }
};

/// Top-r eigenvectors of m. Throws if r exceeds the numerically nonzero
/// spectrum (relative threshold rank_tol against the largest eigenvalue).
TangentSpace tangent_space(const GramMatrix& m, Index r,
                           double rank_tol = 1e-9);

/// Auto-detected rank: position of the largest relative eigen-gap in the
/// descending positive spectrum.
Index detect_rank(const GramMatrix& m, double floor_tol = 1e-12);

/// Projection onto {U Z^T + Z U^T}: P_U X + X P_U - P_U X P_U.
Matrix project_tangent(const Matrix& x, const TangentSpace& t);

/// Complement projection P_{U_perp} X P_{U_perp}.
Matrix project_tangent_complement(const Matrix& x, const TangentSpace& t);

/// The three coherence statistics of a rank-r matrix with respect to the
/// pair basis, each normalized so that the defining inequality holds with
/// equality at the maximizing pair; nu is their maximum.
struct CoherenceReport {
  double nu_w = 0.0;
  double nu_v = 0.0;
  double nu_joint = 0.0;
  double nu = 0.0;
  int n = 0;
  int r = 0;
};

/// Exact coherence: per pair, full expansion of the projected (dual)
/// basis element over the basis. O(L * n^2) with the O(1) pairing trick
/// but still quartic in n; gated by dense_limit (default 40).
CoherenceReport coherence_exact(const GramMatrix& m, Index r,
                                int dense_limit = 40);

inline constexpr int kCoherenceSimplifiedLimit = 256;

/// Simplified coherence from the Frobenius-norm bounds
/// (constants 2, 8, 1 over r/n or r/n^2).
CoherenceReport coherence_simplified(
    const GramMatrix& m, Index r,
    int dense_limit = kCoherenceSimplifiedLimit);

/// Measurement count sufficient for exact recovery with probability
/// >= 1 - n^-beta:
///   ceil( n r log2(4 sqrt(8 L r) n) *
///         96 (nu + 1/(n r)) (beta ln n + ln(4 log2(4 L sqrt(r)))) )
/// Natural log except where log2 is written. Requires beta > 1.
std::int64_t sample_complexity(int n, int r, double nu, double beta);

}  // namespace edg
