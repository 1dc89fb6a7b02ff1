#include "edg/coherence.hpp"

#include "edg/basis.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace edg {

namespace {

struct Spectrum {
  Vector lambda;  // descending
  Matrix u;       // matching columns
};

Spectrum descending_eig(const GramMatrix& m) {
  const Index n = m.n();
  if ((m.values - m.values.transpose()).cwiseAbs().maxCoeff() >
      1e-9 * std::max(1.0, m.values.cwiseAbs().maxCoeff()))
    throw InvalidArgument("coherence: matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m.values);
  Spectrum s;
  s.lambda = eig.eigenvalues().reverse();
  s.u = eig.eigenvectors().rowwise().reverse();
  (void)n;
  return s;
}

}  // namespace

TangentSpace tangent_space(const GramMatrix& m, Index r, double rank_tol) {
  const Index n = m.n();
  if (r < 1 || r > n - 1)
    throw InvalidArgument("tangent_space: need 1 <= r <= n-1");
  const Spectrum s = descending_eig(m);
  const double top = s.lambda[0];
  if (top <= 0.0 || s.lambda[r - 1] <= rank_tol * top)
    throw InvalidArgument(
        "tangent_space: requested rank exceeds the numerical spectrum");
  return {s.u.leftCols(r)};
}

Index detect_rank(const GramMatrix& m, double floor_tol) {
  const Spectrum s = descending_eig(m);
  const double top = s.lambda[0];
  if (top <= floor_tol)
    throw InvalidArgument("detect_rank: matrix is numerically zero");
  Index best = 1;
  double best_gap = 0.0;
  for (Index k = 0; k + 1 < s.lambda.size(); ++k) {
    const double hi = s.lambda[k];
    const double lo = std::max(s.lambda[k + 1], 0.0);
    if (hi <= floor_tol * top) break;
    const double gap = (hi - lo) / hi;
    if (gap > best_gap) {
      best_gap = gap;
      best = k + 1;
    }
  }
  return best;
}

Matrix project_tangent(const Matrix& x, const TangentSpace& t) {
  if (x.rows() != t.n() || x.cols() != t.n())
    throw InvalidArgument("project_tangent: shape mismatch");
  const Matrix utx = t.u.transpose() * x;  // r x n
  const Matrix pux = t.u * utx;            // P_U X
  const Matrix xpu = (x * t.u) * t.u.transpose();
  const Matrix puxpu = t.u * ((utx * t.u) * t.u.transpose());
  return pux + xpu - puxpu;
}

Matrix project_tangent_complement(const Matrix& x, const TangentSpace& t) {
  return x - project_tangent(x, t);
}

namespace {

CoherenceReport finish_report(double max_w, double max_v, double max_joint,
                              Index n, Index r) {
  CoherenceReport rep;
  rep.n = static_cast<int>(n);
  rep.r = static_cast<int>(r);
  const double dn = static_cast<double>(n), dr = static_cast<double>(r);
  rep.nu_w = max_w * dn / (2.0 * dr);
  rep.nu_v = max_v * dn / (4.0 * dr);
  rep.nu_joint = max_joint * 4.0 * dn * dn / dr;
  rep.nu = std::max({rep.nu_w, rep.nu_v, rep.nu_joint});
  return rep;
}

}  // namespace

CoherenceReport coherence_exact(const GramMatrix& m, Index r,
                                int dense_limit) {
  const Index n = m.n();
  if (n > dense_limit)
    throw InvalidArgument("coherence_exact: n = " + std::to_string(n) +
                          " exceeds dense limit " +
                          std::to_string(dense_limit) +
                          " (use the simplified estimator or raise it)");
  const TangentSpace t = tangent_space(m, r);
  const Matrix uut = t.u * t.u.transpose();
  const std::int64_t l = num_pairs(static_cast<int>(n));

  double max_w = 0.0, max_v = 0.0, max_joint = 0.0;
  for (std::int64_t a = 0; a < l; ++a) {
    const IndexPair pa = pair_at(a, static_cast<int>(n));
    const Matrix ptw =
        project_tangent(basis_matrix(pa, static_cast<int>(n)), t);
    const Matrix ptv =
        project_tangent(dual_basis_matrix(pa, static_cast<int>(n)), t);
    double sum_w = 0.0, sum_v = 0.0;
    for (std::int64_t b = 0; b < l; ++b) {
      const IndexPair pb = pair_at(b, static_cast<int>(n));
      const double cw = basis_inner(ptw, pb);
      const double cv = basis_inner(ptv, pb);
      sum_w += cw * cw;
      sum_v += cv * cv;
    }
    max_w = std::max(max_w, sum_w);
    max_v = std::max(max_v, sum_v);
    const double joint = basis_inner(uut, pa);
    max_joint = std::max(max_joint, joint * joint);
  }
  return finish_report(max_w, max_v, max_joint, n, r);
}

CoherenceReport coherence_simplified(const GramMatrix& m, Index r,
                                     int dense_limit) {
  const Index n = m.n();
  if (n > dense_limit)
    throw InvalidArgument("coherence_simplified: n exceeds dense limit " +
                          std::to_string(dense_limit));
  const TangentSpace t = tangent_space(m, r);
  const Matrix uut = t.u * t.u.transpose();
  const std::int64_t l = num_pairs(static_cast<int>(n));

  double max_w = 0.0, max_v = 0.0, max_joint = 0.0;
  for (std::int64_t a = 0; a < l; ++a) {
    const IndexPair pa = pair_at(a, static_cast<int>(n));
    // ||P_T w||_F^2 = 4A - A^2 where A = ||P_U (e_i - e_j)||^2; the basis
    // element is the outer product of e_i - e_j with itself.
    const Eigen::RowVectorXd udiff = t.u.row(pa.i) - t.u.row(pa.j);
    const double aa = udiff.squaredNorm();
    max_w = std::max(max_w, 4.0 * aa - aa * aa);

    const Matrix ptv =
        project_tangent(dual_basis_matrix(pa, static_cast<int>(n)), t);
    max_v = std::max(max_v, ptv.squaredNorm());

    const double joint_v = (dual_basis_matrix(pa, static_cast<int>(n))
                                .cwiseProduct(uut))
                               .sum();
    max_joint = std::max(max_joint, joint_v * joint_v);
  }

  CoherenceReport rep;
  rep.n = static_cast<int>(n);
  rep.r = static_cast<int>(r);
  const double dn = static_cast<double>(n), dr = static_cast<double>(r);
  rep.nu_w = max_w * dn / (2.0 * dr);
  rep.nu_v = max_v * dn / (8.0 * dr);
  rep.nu_joint = max_joint * dn * dn / dr;
  rep.nu = std::max({rep.nu_w, rep.nu_v, rep.nu_joint});
  return rep;
}

std::int64_t sample_complexity(int n, int r, double nu, double beta) {
  if (n < 2) throw InvalidArgument("sample_complexity: n must be >= 2");
  if (r < 1) throw InvalidArgument("sample_complexity: r must be >= 1");
  if (!(nu > 0.0)) throw InvalidArgument("sample_complexity: nu must be > 0");
  if (!(beta > 1.0))
    throw InvalidArgument("sample_complexity: beta must exceed 1");

  const double dn = n, dr = r;
  const double l = static_cast<double>(num_pairs(n));
  const double lead = dn * dr * std::log2(4.0 * std::sqrt(8.0 * l * dr) * dn);
  const double tail =
      96.0 * (nu + 1.0 / (dn * dr)) *
      (beta * std::log(dn) + std::log(4.0 * std::log2(4.0 * l * std::sqrt(dr))));
  return static_cast<std::int64_t>(std::ceil(lead * tail));
}

}  // namespace edg
