#include "edg/basis.hpp"

#include <cmath>
#include <string>

namespace edg {

void validate_pair(IndexPair p, int n) {
  if (p.i < 0 || p.j <= p.i || p.j >= n)
    throw InvalidArgument("invalid index pair (" + std::to_string(p.i + 1) +
                          "," + std::to_string(p.j + 1) + ") for n = " +
                          std::to_string(n));
}

void validate(const ObservationSet& obs) {
  if (obs.n < 2) throw InvalidArgument("observation set needs n >= 2");
  if (obs.values.size() != obs.size())
    throw InvalidArgument("observation pairs/values length mismatch");
  for (const IndexPair& p : obs.pairs) validate_pair(p, obs.n);
  if (!obs.values.allFinite())
    throw InvalidArgument("observation values must be finite");
}

std::int64_t pair_index(IndexPair p, int n) {
  validate_pair(p, n);
  const std::int64_t i = p.i, j = p.j, nn = n;
  return i * nn - i * (i + 1) / 2 + (j - i - 1);
}

IndexPair pair_at(std::int64_t k, int n) {
  if (k < 0 || k >= num_pairs(n))
    throw InvalidArgument("pair index out of range");
  // Solve for the row, then adjust against rounding.
  const double nn = static_cast<double>(n);
  std::int64_t i = static_cast<std::int64_t>(
      std::floor((2 * nn - 1 - std::sqrt((2 * nn - 1) * (2 * nn - 1) -
                                         8.0 * static_cast<double>(k))) /
                 2.0));
  auto row_start = [n](std::int64_t r) {
    return r * n - r * (r + 1) / 2;
  };
  while (i > 0 && row_start(i) > k) --i;
  while (row_start(i + 1) <= k) ++i;
  const std::int64_t j = k - row_start(i) + i + 1;
  return {static_cast<int>(i), static_cast<int>(j)};
}

double basis_inner(const Matrix& x, IndexPair p) {
  return x(p.i, p.i) + x(p.j, p.j) - 2.0 * x(p.i, p.j);
}

double corr_entry(IndexPair a, IndexPair b) {
  if (a == b) return 4.0;
  const int shared = (a.i == b.i) + (a.i == b.j) + (a.j == b.i) + (a.j == b.j);
  return shared == 0 ? 0.0 : 1.0;
}

double corr_inv_entry(IndexPair a, IndexPair b, int n) {
  const double nn = static_cast<double>(n);
  if (a == b) return ((nn - 1) * (nn - 1) + 1) / (2 * nn * nn);
  const int shared = (a.i == b.i) + (a.i == b.j) + (a.j == b.i) + (a.j == b.j);
  if (shared == 0) return 1.0 / (nn * nn);
  return (4 - 2 * nn) / (4 * nn * nn);
}

Matrix basis_matrix(IndexPair p, int n) {
  validate_pair(p, n);
  Matrix w = Matrix::Zero(n, n);
  w(p.i, p.i) = 1.0;
  w(p.j, p.j) = 1.0;
  w(p.i, p.j) = -1.0;
  w(p.j, p.i) = -1.0;
  return w;
}

Matrix dual_basis_matrix(IndexPair p, int n) {
  validate_pair(p, n);
  if (n < 3)
    throw InvalidArgument("dual basis requires n >= 3");
  const double nn = static_cast<double>(n);
  const double diag = (nn - 1) / (nn * nn);
  const double cross = -((nn - 1) * (nn - 1) + 1) / (2 * nn * nn);
  const double fringe = (nn - 2) / (2 * nn * nn);
  const double bulk = -1.0 / (nn * nn);

  Matrix v = Matrix::Constant(n, n, bulk);
  v.row(p.i).setConstant(fringe);
  v.row(p.j).setConstant(fringe);
  v.col(p.i).setConstant(fringe);
  v.col(p.j).setConstant(fringe);
  v(p.i, p.i) = diag;
  v(p.j, p.j) = diag;
  v(p.i, p.j) = cross;
  v(p.j, p.i) = cross;
  return v;
}

namespace {

void check_dense_limit(int n, int dense_limit, const char* what) {
  if (n > dense_limit)
    throw InvalidArgument(std::string(what) + ": n = " + std::to_string(n) +
                          " exceeds dense limit " +
                          std::to_string(dense_limit));
}

}  // namespace

Matrix corr_matrix(int n, int dense_limit) {
  check_dense_limit(n, dense_limit, "corr_matrix");
  const std::int64_t l = num_pairs(n);
  Matrix h(l, l);
  for (std::int64_t a = 0; a < l; ++a) {
    const IndexPair pa = pair_at(a, n);
    for (std::int64_t b = 0; b < l; ++b)
      h(a, b) = corr_entry(pa, pair_at(b, n));
  }
  return h;
}

Matrix corr_inverse_matrix(int n, int dense_limit) {
  check_dense_limit(n, dense_limit, "corr_inverse_matrix");
  const std::int64_t l = num_pairs(n);
  Matrix hinv(l, l);
  for (std::int64_t a = 0; a < l; ++a) {
    const IndexPair pa = pair_at(a, n);
    for (std::int64_t b = 0; b < l; ++b)
      hinv(a, b) = corr_inv_entry(pa, pair_at(b, n), n);
  }
  return hinv;
}

Vector measure(const Matrix& x, const ObservationSet& obs) {
  if (x.rows() != obs.n || x.cols() != obs.n)
    throw InvalidArgument("measure: matrix shape does not match n");
  Vector f(obs.size());
  for (Index e = 0; e < obs.size(); ++e)
    f[e] = basis_inner(x, obs.pairs[static_cast<std::size_t>(e)]);
  return f;
}

Vector measure_factored(const Matrix& p, const ObservationSet& obs) {
  if (p.rows() != obs.n)
    throw InvalidArgument("measure_factored: factor rows do not match n");
  Vector f(obs.size());
  for (Index e = 0; e < obs.size(); ++e) {
    const IndexPair pr = obs.pairs[static_cast<std::size_t>(e)];
    f[e] = (p.row(pr.i) - p.row(pr.j)).squaredNorm();
  }
  return f;
}

Matrix measure_adjoint(const Vector& y, const ObservationSet& obs) {
  if (y.size() != obs.size())
    throw InvalidArgument("measure_adjoint: value length mismatch");
  Matrix m = Matrix::Zero(obs.n, obs.n);
  for (Index e = 0; e < obs.size(); ++e) {
    const IndexPair p = obs.pairs[static_cast<std::size_t>(e)];
    const double v = y[e];
    m(p.i, p.i) += v;
    m(p.j, p.j) += v;
    m(p.i, p.j) -= v;
    m(p.j, p.i) -= v;
  }
  return m;
}

Matrix measure_adjoint_apply(const Vector& y, const ObservationSet& obs,
                             const Matrix& p) {
  if (y.size() != obs.size())
    throw InvalidArgument("measure_adjoint_apply: value length mismatch");
  if (p.rows() != obs.n)
    throw InvalidArgument("measure_adjoint_apply: factor rows mismatch");
  Matrix out = Matrix::Zero(p.rows(), p.cols());
  Eigen::RowVectorXd diff(p.cols());
  for (Index e = 0; e < obs.size(); ++e) {
    const IndexPair pr = obs.pairs[static_cast<std::size_t>(e)];
    diff = y[e] * (p.row(pr.i) - p.row(pr.j));
    out.row(pr.i) += diff;
    out.row(pr.j) -= diff;
  }
  return out;
}

Matrix sampling_operator(const Matrix& x, const ObservationSet& obs,
                         int dense_limit) {
  check_dense_limit(obs.n, dense_limit, "sampling_operator");
  if (obs.n < 3)
    throw InvalidArgument("sampling_operator requires n >= 3");
  if (obs.size() == 0)
    throw InvalidArgument("sampling_operator: empty observation set");
  const double scale =
      static_cast<double>(num_pairs(obs.n)) / static_cast<double>(obs.size());
  Matrix out = Matrix::Zero(obs.n, obs.n);
  for (const IndexPair& p : obs.pairs)
    out += basis_inner(x, p) * dual_basis_matrix(p, obs.n);
  return scale * out;
}

Matrix frame_operator(const Matrix& x, const ObservationSet& obs) {
  if (obs.size() == 0)
    throw InvalidArgument("frame_operator: empty observation set");
  const Vector coeffs = measure(x, obs);
  const double scale =
      static_cast<double>(num_pairs(obs.n)) / static_cast<double>(obs.size());
  return scale * measure_adjoint(coeffs, obs);
}

}  // namespace edg
