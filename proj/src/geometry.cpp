#include "edg/geometry.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>

namespace edg {

void validate(const PointCloud& pts) {
  if (pts.n() < 1 || pts.dim() < 1)
    throw InvalidArgument("point cloud must have n >= 1 and d >= 1");
  if (!pts.coords.allFinite())
    throw InvalidArgument("point cloud has non-finite coordinates");
}

void validate(const SquaredDistanceMatrix& d, double tol) {
  const Index n = d.n();
  if (n < 1 || d.values.cols() != n)
    throw InvalidArgument("distance matrix must be square and non-empty");
  if (!d.values.allFinite())
    throw InvalidArgument("distance matrix has non-finite entries");
  if ((d.values - d.values.transpose()).cwiseAbs().maxCoeff() > tol)
    throw InvalidArgument("distance matrix is not symmetric");
  if (d.values.diagonal().cwiseAbs().maxCoeff() > tol)
    throw InvalidArgument("distance matrix has a nonzero diagonal");
  if (d.values.minCoeff() < -tol)
    throw InvalidArgument("distance matrix has negative entries");
}

Matrix centering_matrix(Index n) {
  return Matrix::Identity(n, n) - Matrix::Constant(n, n, 1.0 / double(n));
}

SquaredDistanceMatrix distance_matrix_from_points(const PointCloud& pts) {
  validate(pts);
  const Index n = pts.n();
  Matrix d = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double v = (pts.coords.row(i) - pts.coords.row(j)).squaredNorm();
      d(i, j) = v;
      d(j, i) = v;
    }
  }
  return {std::move(d)};
}

GramMatrix center_gram_from_points(const PointCloud& pts) {
  validate(pts);
  const Matrix centered =
      pts.coords.rowwise() - pts.coords.colwise().mean();
  return {centered * centered.transpose()};
}

GramMatrix gram_from_distances(const SquaredDistanceMatrix& d) {
  validate(d);
  const Matrix j = centering_matrix(d.n());
  return {-0.5 * j * d.values * j};
}

bool is_edm(const SquaredDistanceMatrix& d, double tol) {
  const GramMatrix g = gram_from_distances(d);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(g.values,
                                            Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff() >= -tol;
}

namespace {

// First component whose magnitude is above a relative threshold must be
// positive; flips the column in place otherwise.
void fix_sign(Eigen::Ref<Vector> v) {
  const double thresh = 1e-12 * v.cwiseAbs().maxCoeff();
  for (Index k = 0; k < v.size(); ++k) {
    if (std::abs(v[k]) > thresh) {
      if (v[k] < 0.0) v = -v;
      return;
    }
  }
}

}  // namespace

PointCloud mds_embed(const GramMatrix& g, Index d, MdsDiagnostics* diag) {
  const Index n = g.n();
  if (d < 1 || d > n)
    throw InvalidArgument("mds_embed: dimension must satisfy 1 <= d <= n");
  if ((g.values - g.values.transpose()).cwiseAbs().maxCoeff() >
      1e-9 * std::max(1.0, g.values.cwiseAbs().maxCoeff()))
    throw InvalidArgument("mds_embed: Gram matrix is not symmetric");

  Eigen::SelfAdjointEigenSolver<Matrix> eig(g.values);
  // Eigen returns ascending order; we want descending.
  Vector lambda = eig.eigenvalues().reverse();
  Matrix u = eig.eigenvectors().rowwise().reverse();

  double clamped = 0.0;
  for (Index k = 0; k < n; ++k) {
    if (lambda[k] < 0.0) {
      clamped += -lambda[k];
      lambda[k] = 0.0;
    }
  }
  if (diag) diag->clamped_mass = clamped;

  Matrix coords(n, d);
  for (Index k = 0; k < d; ++k) {
    Vector col = u.col(k);
    fix_sign(col);
    coords.col(k) = col * std::sqrt(lambda[k]);
  }
  return {std::move(coords)};
}

ProcrustesResult procrustes_align(const PointCloud& a, const PointCloud& b) {
  validate(a);
  validate(b);
  if (a.n() != b.n() || a.dim() != b.dim())
    throw InvalidArgument("procrustes_align: shape mismatch");

  const Eigen::RowVectorXd ca = a.coords.colwise().mean();
  const Eigen::RowVectorXd cb = b.coords.colwise().mean();
  const Matrix a0 = a.coords.rowwise() - ca;
  const Matrix b0 = b.coords.rowwise() - cb;

  // Orthogonal Q minimizing ||a0 Q - b0||_F; reflections allowed since
  // distances cannot distinguish chirality.
  Eigen::JacobiSVD<Matrix> svd(a0.transpose() * b0,
                               Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Matrix q = svd.matrixU() * svd.matrixV().transpose();

  Matrix aligned = a0 * q;
  const double rmsd =
      (aligned - b0).norm() / std::sqrt(static_cast<double>(a.n()));
  aligned.rowwise() += cb;
  return {{std::move(aligned)}, rmsd};
}

double relative_gram_error(const GramMatrix& x, const GramMatrix& m) {
  if (x.values.rows() != m.values.rows() ||
      x.values.cols() != m.values.cols())
    throw InvalidArgument("relative_gram_error: shape mismatch");
  const double ref = m.values.norm();
  if (ref == 0.0)
    throw InvalidArgument("relative_gram_error: reference has zero norm");
  return (x.values - m.values).norm() / ref;
}

}  // namespace edg
