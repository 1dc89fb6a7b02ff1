#include "edg/verify.hpp"

#include "edg/basis.hpp"
#include "edg/geometry.hpp"
#include "edg/rng.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <ostream>
#include <sstream>

namespace edg {

Matrix random_zero_row_sum_symmetric(int n, std::uint64_t seed) {
  Rng rng(seed);
  Matrix s(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double v = 2.0 * rng.uniform() - 1.0;
      s(i, j) = v;
      s(j, i) = v;
    }
  const Matrix j = centering_matrix(n);
  return j * s * j;
}

namespace {

struct Tracker {
  double worst = 0.0;
  void track(double deviation) { worst = std::max(worst, deviation); }
  bool within(double tol) const { return worst <= tol; }
};

CheckResult make_result(const std::string& name, const Tracker& t,
                        double tol) {
  std::ostringstream detail;
  detail << "max deviation " << t.worst << " (tol " << tol << ")";
  return {name, t.within(tol), t.worst, detail.str()};
}

}  // namespace

std::vector<CheckResult> run_identity_checks(int n_lo, int n_hi,
                                             int random_trials,
                                             std::uint64_t seed) {
  if (n_lo < 3 || n_hi < n_lo)
    throw InvalidArgument("identity checks need 3 <= n_lo <= n_hi");
  std::vector<CheckResult> results;

  Tracker duality, expansion, inverse, eig_top, eig_bottom, row_sums,
      norm_bounds;
  bool ones_eigvec_exact = true;
  bool basis_square_exact = true;

  for (int n = n_lo; n <= n_hi; ++n) {
    const std::int64_t l = num_pairs(n);
    const double dn = n;

    std::vector<Matrix> duals;
    duals.reserve(static_cast<std::size_t>(l));
    for (std::int64_t a = 0; a < l; ++a)
      duals.push_back(dual_basis_matrix(pair_at(a, n), n));

    // Duality against every basis element, and the expansion of the dual
    // through the closed-form inverse correlation matrix.
    for (std::int64_t a = 0; a < l; ++a) {
      const IndexPair pa = pair_at(a, n);
      Matrix expanded = Matrix::Zero(n, n);
      for (std::int64_t b = 0; b < l; ++b) {
        const IndexPair pb = pair_at(b, n);
        const double pairing = basis_inner(duals[a], pb);
        duality.track(std::abs(pairing - (a == b ? 1.0 : 0.0)));
        const double coeff = corr_inv_entry(pa, pb, n);
        expanded(pb.i, pb.i) += coeff;
        expanded(pb.j, pb.j) += coeff;
        expanded(pb.i, pb.j) -= coeff;
        expanded(pb.j, pb.i) -= coeff;
      }
      expansion.track((expanded - duals[a]).cwiseAbs().maxCoeff());
    }

    // Correlation matrix facts.
    const Matrix corr = corr_matrix(n);
    const Matrix corr_inv = corr_inverse_matrix(n);
    inverse.track((corr * corr_inv - Matrix::Identity(l, l))
                      .cwiseAbs()
                      .maxCoeff());

    Eigen::SelfAdjointEigenSolver<Matrix> eig(corr, Eigen::EigenvaluesOnly);
    eig_top.track(std::abs(eig.eigenvalues().maxCoeff() - 2.0 * dn));
    eig_bottom.track(std::max(0.0, 1.0 - eig.eigenvalues().minCoeff()));
    if ((corr * Vector::Ones(l) - 2.0 * dn * Vector::Ones(l))
            .cwiseAbs()
            .maxCoeff() != 0.0)
      ones_eigvec_exact = false;

    const double expected_row_sum = 2.0 - 15.0 / (2.0 * dn) + 8.0 / (dn * dn);
    for (std::int64_t a = 0; a < l; ++a)
      row_sums.track(
          std::abs(corr_inv.row(a).cwiseAbs().sum() - expected_row_sum));

    // Sum of squared basis elements, in integer arithmetic.
    Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> total =
        Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>::Zero(n,
                                                                          n);
    for (std::int64_t a = 0; a < l; ++a) {
      const IndexPair p = pair_at(a, n);
      // The square of a basis element is twice itself.
      total(p.i, p.i) += 2;
      total(p.j, p.j) += 2;
      total(p.i, p.j) -= 2;
      total(p.j, p.i) -= 2;
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const std::int64_t expected = (i == j) ? 2 * n - 2 : -2;
        if (total(i, j) != expected) basis_square_exact = false;
      }

    // Norm bounds on random zero-row-sum test matrices:
    //   ||X||_F^2 <= sum <X,w>^2 <= 2n ||X||_F^2
    //   (1/2n) ||X||_F^2 <= sum <X,v>^2 <= ||X||_F^2
    for (int trial = 0; trial < random_trials; ++trial) {
      const Matrix x = random_zero_row_sum_symmetric(
          n, derive_seed(seed, static_cast<std::uint64_t>(n) * 1000 +
                                   static_cast<std::uint64_t>(trial)));
      const double xsq = x.squaredNorm();
      double sum_w = 0.0, sum_v = 0.0;
      for (std::int64_t a = 0; a < l; ++a) {
        const IndexPair p = pair_at(a, n);
        const double cw = basis_inner(x, p);
        const double cv = (duals[a].cwiseProduct(x)).sum();
        sum_w += cw * cw;
        sum_v += cv * cv;
      }
      // Track violations relative to ||X||_F^2.
      norm_bounds.track(std::max(0.0, xsq - sum_w) / xsq);
      norm_bounds.track(std::max(0.0, sum_w - 2.0 * dn * xsq) / xsq);
      norm_bounds.track(std::max(0.0, xsq / (2.0 * dn) - sum_v) / xsq);
      norm_bounds.track(std::max(0.0, sum_v - xsq) / xsq);
    }
  }

  results.push_back(make_result("dual basis pairing is the identity",
                                duality, 1e-12));
  results.push_back(make_result(
      "closed-form dual equals its inverse-correlation expansion", expansion,
      1e-12));
  results.push_back(make_result(
      "correlation matrix times closed-form inverse is the identity",
      inverse, 1e-10));
  results.push_back(
      make_result("top correlation eigenvalue equals 2n", eig_top, 1e-9));
  results.push_back({"all-ones is an exact top eigenvector",
                     ones_eigvec_exact, 0.0,
                     ones_eigvec_exact ? "exact" : "mismatch"});
  results.push_back(make_result("bottom correlation eigenvalue at least 1",
                                eig_bottom, 1e-9));
  results.push_back(make_result(
      "absolute row sums of the inverse match 2 - 15/(2n) + 8/n^2", row_sums,
      1e-12));
  results.push_back({"sum of squared basis elements is 2n I - 2 ones",
                     basis_square_exact, 0.0,
                     basis_square_exact ? "exact" : "mismatch"});
  results.push_back(make_result(
      "coefficient sums obey the two-sided norm bounds", norm_bounds, 1e-9));
  return results;
}

int report_checks(const std::vector<CheckResult>& checks, std::ostream& out) {
  int failures = 0;
  for (const CheckResult& c : checks) {
    out << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << ": " << c.detail
        << "\n";
    failures += c.pass ? 0 : 1;
  }
  return failures;
}

}  // namespace edg
