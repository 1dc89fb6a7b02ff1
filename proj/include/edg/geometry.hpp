#pragma once

#include "edg/types.hpp"

namespace edg {

/// D_ij = ||p_i - p_j||^2. Symmetric and hollow by construction.
SquaredDistanceMatrix distance_matrix_from_points(const PointCloud& pts);

/// Gram matrix (JP)(JP)^T of the centered cloud, J = I - (1/n)11^T.
GramMatrix center_gram_from_points(const PointCloud& pts);

/// Gower/Schoenberg map -1/2 J D J. Accepts any symmetric hollow input;
/// the PSD check is is_edm.
GramMatrix gram_from_distances(const SquaredDistanceMatrix& d);

/// True iff lambda_min(-1/2 J D J) >= -tol, i.e. D is realizable in some
/// Euclidean space.
bool is_edm(const SquaredDistanceMatrix& d, double tol = 1e-9);

struct MdsDiagnostics {
  double clamped_mass = 0.0;  // |sum of negative eigenvalues| dropped
};

/// Classical MDS: coordinates U_d diag(sqrt(lambda_d)) from the top-d
/// eigenpairs of G, negative eigenvalues clamped to zero. Eigenvalues are
/// ordered descending; each eigenvector is sign-fixed so its first
/// component of nontrivial magnitude is positive.
PointCloud mds_embed(const GramMatrix& g, Index d,
                     MdsDiagnostics* diag = nullptr);

struct ProcrustesResult {
  PointCloud aligned;
  double rmsd = 0.0;
};

/// Least-squares rigid alignment of a onto b over the full orthogonal
/// group (reflections allowed) plus translation.
ProcrustesResult procrustes_align(const PointCloud& a, const PointCloud& b);

/// ||X - M||_F / ||M||_F. Throws if ||M||_F = 0.
double relative_gram_error(const GramMatrix& x, const GramMatrix& m);

/// Centering projector J = I - (1/n)11^T.
Matrix centering_matrix(Index n);

}  // namespace edg
