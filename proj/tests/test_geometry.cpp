#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "edg/geometry.hpp"
#include "edg/rng.hpp"
#include "helpers.hpp"

#include <cmath>

using namespace edg;
using edg::testing::random_cloud;

TEST_CASE("squared distance matrix on hand-checkable clouds") {
  SUBCASE("single point is the 1x1 zero matrix") {
    PointCloud one{Matrix::Zero(1, 4)};
    const auto d = distance_matrix_from_points(one);
    CHECK(d.values(0, 0) == 0.0);
  }
  SUBCASE("unit segment") {
    Matrix coords(2, 1);
    coords << 0.0, 1.0;
    const auto d = distance_matrix_from_points({coords});
    CHECK(d.values(0, 1) == 1.0);
    CHECK(d.values(1, 0) == 1.0);
    CHECK(d.values(0, 0) == 0.0);
  }
  SUBCASE("3-4-5 right triangle") {
    Matrix coords(3, 2);
    coords << 0, 0, 3, 0, 0, 4;
    const auto d = distance_matrix_from_points({coords});
    Matrix expected(3, 3);
    expected << 0, 9, 16, 9, 0, 25, 16, 25, 0;
    CHECK((d.values - expected).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("non-finite coordinates rejected") {
    Matrix coords(2, 1);
    coords << 0.0, std::nan("");
    CHECK_THROWS_AS(distance_matrix_from_points({coords}),
                    InvalidArgument);
  }
}

TEST_CASE("centered Gram matrix") {
  SUBCASE("two points on a line") {
    Matrix coords(2, 1);
    coords << 0.0, 1.0;
    const auto g = center_gram_from_points({coords});
    Matrix expected(2, 2);
    expected << 0.25, -0.25, -0.25, 0.25;
    CHECK((g.values - expected).cwiseAbs().maxCoeff() <= 1e-15);
  }
  SUBCASE("translation invariance") {
    const PointCloud pts = random_cloud(17, 3, 11);
    PointCloud shifted = pts;
    shifted.coords.rowwise() += Eigen::RowVector3d(3.5, -2.0, 7.25);
    const auto a = center_gram_from_points(pts);
    const auto b = center_gram_from_points(shifted);
    CHECK((a.values - b.values).cwiseAbs().maxCoeff() <= 1e-12);
  }
  SUBCASE("matches the double-loop definition") {
    const PointCloud pts = random_cloud(3, 2, 5);
    const Eigen::RowVector2d c = pts.coords.colwise().mean();
    const auto g = center_gram_from_points(pts);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const double expected =
            (pts.coords.row(i) - c).dot(pts.coords.row(j) - c);
        CHECK(g.values(i, j) == doctest::Approx(expected).epsilon(1e-12));
      }
  }
  SUBCASE("row sums vanish") {
    const auto g = center_gram_from_points(random_cloud(40, 5, 3));
    CHECK(g.values.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("Gram from distances") {
  SUBCASE("two-point case") {
    Matrix d(2, 2);
    d << 0, 1, 1, 0;
    const auto g = gram_from_distances({d});
    Matrix expected(2, 2);
    expected << 0.25, -0.25, -0.25, 0.25;
    CHECK((g.values - expected).cwiseAbs().maxCoeff() <= 1e-15);
  }
  SUBCASE("agrees with center_gram on the generating cloud") {
    Matrix coords(3, 2);
    coords << 0, 0, 3, 0, 0, 4;
    const PointCloud pts{coords};
    const auto via_d = gram_from_distances(distance_matrix_from_points(pts));
    const auto direct = center_gram_from_points(pts);
    CHECK((via_d.values - direct.values).cwiseAbs().maxCoeff() <= 1e-12);
  }
  SUBCASE("zero distances give the zero Gram") {
    const auto g = gram_from_distances({Matrix::Zero(4, 4)});
    CHECK(g.values.cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("row sums always vanish") {
    // Arbitrary symmetric hollow nonnegative input, not a realizable one.
    Matrix d(3, 3);
    d << 0, 1, 100, 1, 0, 1, 100, 1, 0;
    const auto g = gram_from_distances({d});
    CHECK(g.values.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("realizability test") {
  Matrix pyth(3, 3);
  pyth << 0, 9, 16, 9, 0, 25, 16, 25, 0;
  CHECK(is_edm({pyth}, 1e-9));

  // Violates the triangle inequality badly; the centered matrix must have
  // a clearly negative eigenvalue (checked directly as the oracle).
  Matrix bad(3, 3);
  bad << 0, 1, 100, 1, 0, 1, 100, 1, 0;
  const auto g = gram_from_distances({bad});
  Eigen::SelfAdjointEigenSolver<Matrix> eig(g.values);
  CHECK(eig.eigenvalues().minCoeff() < -1.0);
  CHECK_FALSE(is_edm({bad}, 1e-9));

  CHECK(is_edm({Matrix::Zero(1, 1)}, 1e-9));
}

TEST_CASE("classical MDS embedding") {
  SUBCASE("two points give +-1/2 up to sign") {
    Matrix g(2, 2);
    g << 0.25, -0.25, -0.25, 0.25;
    const PointCloud pts = mds_embed({g}, 1);
    CHECK(std::abs(std::abs(pts.coords(0, 0)) - 0.5) <= 1e-12);
    CHECK(pts.coords(0, 0) == doctest::Approx(-pts.coords(1, 0)));
  }
  SUBCASE("round trip through a rank-3 Gram of 100 points") {
    const PointCloud pts = random_cloud(100, 3, 42);
    const auto g = center_gram_from_points(pts);
    const PointCloud back = mds_embed(g, 3);
    const auto g2 = center_gram_from_points(back);
    CHECK(relative_gram_error(g2, g) <= 1e-10);
  }
  SUBCASE("extra dimensions come out as (numerically) zero columns") {
    const PointCloud pts = random_cloud(8, 2, 7);
    const auto g = center_gram_from_points(pts);
    const PointCloud emb = mds_embed(g, 5);
    // Square roots of eigensolver noise on the zero eigenvalues.
    for (Index c = 2; c < 5; ++c)
      CHECK(emb.coords.col(c).norm() <= 1e-6);
  }
  SUBCASE("clamped mass reported for indefinite input") {
    Matrix g = Matrix::Zero(3, 3);
    g(0, 0) = 1.0;
    g(1, 1) = -0.5;
    MdsDiagnostics diag;
    mds_embed({g}, 2, &diag);
    CHECK(diag.clamped_mass == doctest::Approx(0.5));
  }
  SUBCASE("d out of range") {
    CHECK_THROWS_AS(mds_embed({Matrix::Zero(3, 3)}, 4), InvalidArgument);
    CHECK_THROWS_AS(mds_embed({Matrix::Zero(3, 3)}, 0), InvalidArgument);
  }
  SUBCASE("deterministic sign convention") {
    const auto g = center_gram_from_points(random_cloud(12, 3, 9));
    const PointCloud a = mds_embed(g, 3);
    const PointCloud b = mds_embed(g, 3);
    CHECK((a.coords - b.coords).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("Procrustes alignment") {
  const PointCloud pts = random_cloud(30, 3, 123);

  SUBCASE("identical clouds") {
    const auto res = procrustes_align(pts, pts);
    CHECK(res.rmsd <= 1e-13);
  }
  SUBCASE("rigid motion is undone") {
    Matrix rot(3, 3);
    rot << 0, -1, 0, 1, 0, 0, 0, 0, 1;  // 90 degrees about z
    PointCloud moved{pts.coords * rot.transpose()};
    moved.coords.rowwise() += Eigen::RowVector3d(5, -3, 2);
    const auto res = procrustes_align(moved, pts);
    CHECK(res.rmsd <= 1e-12);
    CHECK((res.aligned.coords - pts.coords).cwiseAbs().maxCoeff() <= 1e-10);
  }
  SUBCASE("reflections are allowed") {
    PointCloud mirrored = pts;
    mirrored.coords.col(0) *= -1.0;
    CHECK(procrustes_align(mirrored, pts).rmsd <= 1e-12);
  }
  SUBCASE("small perturbations stay within scale") {
    const double eps = 1e-3;
    Rng rng(77);
    PointCloud noisy = pts;
    for (Index i = 0; i < noisy.n(); ++i)
      for (Index c = 0; c < noisy.dim(); ++c)
        noisy.coords(i, c) += eps * (rng.uniform() - 0.5);
    const auto res = procrustes_align(noisy, pts);
    CHECK(res.rmsd <= eps * std::sqrt(3.0));
  }
  SUBCASE("shape mismatch") {
    CHECK_THROWS_AS(procrustes_align(pts, random_cloud(29, 3, 1)),
                    InvalidArgument);
  }
}

TEST_CASE("relative Gram error") {
  const auto m = center_gram_from_points(random_cloud(10, 3, 4));
  CHECK(relative_gram_error(m, m) == 0.0);
  GramMatrix twice{2.0 * m.values};
  CHECK(relative_gram_error(twice, m) == doctest::Approx(1.0));

  GramMatrix perturbed{m.values};
  Matrix e = testing::random_symmetric(10, 6);
  e *= 0.1 * m.values.norm() / e.norm();
  perturbed.values += e;
  CHECK(relative_gram_error(perturbed, m) == doctest::Approx(0.1));

  CHECK_THROWS_AS(relative_gram_error(m, {Matrix::Zero(10, 10)}),
                  InvalidArgument);
}

TEST_CASE("full geometry round trip") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const PointCloud pts = random_cloud(60, 3, seed);
    const auto d = distance_matrix_from_points(pts);
    const auto g = gram_from_distances(d);

    const auto direct = center_gram_from_points(pts);
    CHECK((g.values - direct.values).cwiseAbs().maxCoeff() <= 1e-10);

    const PointCloud emb = mds_embed(g, 3);
    const auto res = procrustes_align(emb, pts);
    CHECK(res.rmsd <= 1e-8);
  }
}
