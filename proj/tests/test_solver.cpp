#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "edg/basis.hpp"
#include "edg/geometry.hpp"
#include "edg/rng.hpp"
#include "edg/sampling.hpp"
#include "edg/solver.hpp"
#include "helpers.hpp"

#include <cmath>

using namespace edg;
using edg::testing::random_cloud;

namespace {

ObservationSet sampled_observation(const PointCloud& pts, double rate,
                                   std::uint64_t seed,
                                   bool with_replacement = false) {
  const int n = static_cast<int>(pts.n());
  const auto m = std::max<std::int64_t>(
      1, std::llround(rate * static_cast<double>(num_pairs(n))));
  const auto pairs = sample_pairs(n, m, with_replacement, seed);
  return observe(distance_matrix_from_points(pts), pairs, with_replacement);
}

ObservationSet full_observation(const PointCloud& pts) {
  return sampled_observation(pts, 1.0, 0);
}

// Quadratic bowl around a target factor; BB needs almost no iterations.
struct QuadraticBowl {
  Matrix target;
  double value(const Matrix& p) const { return (p - target).squaredNorm(); }
  Matrix grad(const Matrix& p) const { return 2.0 * (p - target); }
};

}  // namespace

TEST_CASE("BB descent") {
  SUBCASE("solves a quadratic bowl in a few steps") {
    const Matrix target = random_cloud(12, 4, 2).coords;
    const Matrix start = random_cloud(12, 4, 3).coords;
    const QuadraticBowl bowl{target};
    const BbResult res = bb_descent(bowl, start, 15, 1e-12);
    CHECK((res.p - target).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(res.steps <= 15);
  }
  SUBCASE("zero gradient returns the start unchanged") {
    const Matrix start = random_cloud(5, 2, 4).coords;
    const QuadraticBowl bowl{start};
    const BbResult res = bb_descent(bowl, start, 10, 1e-8);
    CHECK(res.steps == 0);
    CHECK((res.p - start).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("analytic gradients match central finite differences") {
  const int n = 12, q = 3;
  const PointCloud pts = random_cloud(n, 3, 7);
  ObservationSet obs = sampled_observation(pts, 0.3, 5, true);
  REQUIRE(obs.size() <= 30);

  // Exact-path objective with a nonzero multiplier folded in, and the
  // noisy-path objective; both share the FactoredObjective form.
  const Vector multiplier = testing::random_vector(obs.size(), 8);
  const std::vector<FactoredObjective> objectives = {
      {&obs, obs.values - multiplier, 1.0},
      {&obs, obs.values, 17.0},
  };

  const double h = 1e-6;
  for (const auto& obj : objectives) {
    for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
      Matrix p = random_cloud(n, q, seed).coords;
      const Matrix g = obj.grad(p);
      const double scale = g.cwiseAbs().maxCoeff();
      for (Index i = 0; i < n; i += 3) {
        for (Index c = 0; c < q; ++c) {
          const double orig = p(i, c);
          p(i, c) = orig + h;
          const double up = obj.value(p);
          p(i, c) = orig - h;
          const double down = obj.value(p);
          p(i, c) = orig;
          const double fd = (up - down) / (2.0 * h);
          CHECK(std::abs(fd - g(i, c)) <= 1e-5 * std::max(1.0, scale));
        }
      }
    }
  }
}

TEST_CASE("fully observed instance is recovered") {
  const PointCloud pts = random_cloud(30, 3, 11);
  const GramMatrix truth = center_gram_from_points(pts);
  const ObservationSet obs = full_observation(pts);

  SolverConfig cfg;
  cfg.seed = 99;
  const auto [factor, report] = solve_exact(obs, cfg);
  CHECK(report.converged);
  CHECK(relative_gram_error(recover_gram(factor), truth) < 1e-5);
}

TEST_CASE("partially observed rank-2 instance, frozen regression bound") {
  const PointCloud pts = random_cloud(200, 2, 31);
  const GramMatrix truth = center_gram_from_points(pts);
  const ObservationSet obs = sampled_observation(pts, 0.2, 17);

  SolverConfig cfg;
  cfg.seed = 4;
  const auto [factor, report] = solve_exact(obs, cfg);
  CHECK(report.converged);
  CHECK(report.iterations <= 60);
  CHECK(relative_gram_error(recover_gram(factor), truth) < 1e-4);
}

TEST_CASE("overparameterization tolerance") {
  const PointCloud pts = random_cloud(200, 3, 13);
  const GramMatrix truth = center_gram_from_points(pts);
  const ObservationSet obs = sampled_observation(pts, 0.2, 23);

  for (int q : {4, 10, 20}) {
    SolverConfig cfg;
    cfg.q = q;
    cfg.seed = 5;
    const auto [factor, report] = solve_exact(obs, cfg);
    INFO("q = ", q);
    CHECK(relative_gram_error(recover_gram(factor), truth) < 1e-3);
  }
}

TEST_CASE("noise-free penalized solve agrees with the constrained one") {
  const PointCloud pts = random_cloud(60, 3, 3);
  const GramMatrix truth = center_gram_from_points(pts);
  const ObservationSet obs = sampled_observation(pts, 0.5, 5);

  SolverConfig cfg;
  cfg.seed = 6;
  const auto [pf_exact, rep_exact] = solve_exact(obs, cfg);
  cfg.lambda = 100.0;
  const auto [pf_noisy, rep_noisy] = solve_noisy(obs, cfg);
  const double err_exact =
      relative_gram_error(recover_gram(pf_exact), truth);
  const double err_noisy =
      relative_gram_error(recover_gram(pf_noisy), truth);
  // Both reach the ground truth; the penalized path is tol-level accurate.
  CHECK(err_exact < 1e-4);
  CHECK(err_noisy < 1e-2);
}

TEST_CASE("penalized solve error decreases as the weight grows") {
  const PointCloud pts = random_cloud(80, 3, 9);
  const GramMatrix truth = center_gram_from_points(pts);
  const ObservationSet obs = sampled_observation(pts, 0.4, 7);

  double last = 1e9;
  for (double lambda : {1.0, 10.0, 100.0}) {
    SolverConfig cfg;
    cfg.seed = 8;
    cfg.lambda = lambda;
    const auto [factor, report] = solve_noisy(obs, cfg);
    const double err = relative_gram_error(recover_gram(factor), truth);
    CHECK(err < last);
    last = err;
  }
}

TEST_CASE("automatic penalty weight resolves to 100 times the rate") {
  const PointCloud pts = random_cloud(40, 3, 2);
  const ObservationSet obs = sampled_observation(pts, 0.25, 3);
  SolverConfig cfg;
  cfg.seed = 1;
  const auto [factor, report] = solve_noisy(obs, cfg);
  const double gamma = static_cast<double>(obs.size()) /
                       static_cast<double>(num_pairs(40));
  CHECK(report.resolved_lambda == doctest::Approx(100.0 * gamma));
}

TEST_CASE("energy traces") {
  const PointCloud pts = random_cloud(50, 3, 21);
  const ObservationSet obs = sampled_observation(pts, 0.3, 9);
  SolverConfig cfg;
  cfg.seed = 12;

  SUBCASE("feasibility energies are nonnegative and recorded per round") {
    const auto [factor, report] = solve_exact(obs, cfg);
    CHECK(report.energy_trace.size() ==
          static_cast<std::size_t>(report.iterations));
    for (const EnergyPoint& e : report.energy_trace)
      CHECK(e.feasibility >= 0.0);
  }
  SUBCASE("identical configs give bitwise-identical traces") {
    const auto [f1, r1] = solve_exact(obs, cfg);
    const auto [f2, r2] = solve_exact(obs, cfg);
    REQUIRE(r1.energy_trace.size() == r2.energy_trace.size());
    for (std::size_t k = 0; k < r1.energy_trace.size(); ++k) {
      CHECK(r1.energy_trace[k].total == r2.energy_trace[k].total);
      CHECK(r1.energy_trace[k].feasibility ==
            r2.energy_trace[k].feasibility);
    }
    CHECK((f1.p - f2.p).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("rigid motions leave the observations unchanged") {
  const PointCloud pts = random_cloud(25, 3, 14);
  Matrix rot(3, 3);
  const double c = std::cos(0.7), s = std::sin(0.7);
  rot << c, -s, 0, s, c, 0, 0, 0, 1;
  PointCloud moved{pts.coords * rot.transpose()};
  moved.coords.rowwise() += Eigen::RowVector3d(4, 5, -6);

  const auto pairs = sample_pairs(25, 60, true, 10);
  const ObservationSet a = observe(distance_matrix_from_points(pts), pairs);
  const ObservationSet b =
      observe(distance_matrix_from_points(moved), pairs);
  CHECK((a.values - b.values).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("Gram recovery from the factor") {
  SUBCASE("identical rows collapse to zero") {
    Matrix p(4, 2);
    p << 1, 2, 1, 2, 1, 2, 1, 2;
    CHECK(recover_gram({p}).values.cwiseAbs().maxCoeff() <= 1e-15);
  }
  SUBCASE("already centered factors are fixed points") {
    Matrix p = random_cloud(10, 3, 5).coords;
    p.rowwise() -= p.colwise().mean().eval();
    const GramMatrix g = recover_gram({p});
    CHECK((g.values - p * p.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
  }
  SUBCASE("agrees with an explicit orthonormal-complement form") {
    const int n = 12;
    const Matrix p = random_cloud(n, 4, 6).coords;
    // Any orthonormal basis of the hyperplane orthogonal to the all-ones
    // vector gives the same centering projector.
    Matrix a(n, n);
    a.col(0) = Vector::Ones(n);
    a.rightCols(n - 1) = random_cloud(n, n - 1, 41).coords;
    const Matrix q = Eigen::HouseholderQR<Matrix>(a).householderQ();
    const Matrix cc = q.rightCols(n - 1) * q.rightCols(n - 1).transpose();
    const Matrix expected = cc * p * p.transpose() * cc;
    CHECK((recover_gram({p}).values - expected).cwiseAbs().maxCoeff() <=
          1e-10);
  }
  SUBCASE("row sums vanish and the result is PSD") {
    const Matrix p = random_cloud(20, 5, 7).coords;
    const GramMatrix g = recover_gram({p});
    CHECK(g.values.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-10);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(g.values,
                                              Eigen::EigenvaluesOnly);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-10);
  }
}

TEST_CASE("end-to-end reconstruction") {
  SUBCASE("tiny exact instance") {
    Matrix coords(3, 2);
    coords << 0, 0, 3, 0, 0, 4;
    const PointCloud pts{coords};
    const ObservationSet obs = full_observation(pts);
    SolverConfig cfg;
    cfg.seed = 2;
    cfg.q = 3;
    const GramMatrix truth = center_gram_from_points(pts);
    const auto rec = reconstruct(obs, cfg, 2, false, &truth);
    CHECK(procrustes_align(rec.points, pts).rmsd < 1e-5);
    CHECK(rec.report.relative_error.has_value());
  }
  SUBCASE("seeded mid-size instance") {
    const PointCloud pts = random_cloud(500, 3, 77);
    const GramMatrix truth = center_gram_from_points(pts);
    const ObservationSet obs = sampled_observation(pts, 0.08, 13);
    SolverConfig cfg;
    cfg.seed = 3;
    const auto rec = reconstruct(obs, cfg, 3, false, &truth);
    const double rmsd = procrustes_align(rec.points, pts).rmsd;
    const double diameter = std::sqrt(
        distance_matrix_from_points(pts).values.maxCoeff());
    CHECK(rmsd / diameter < 1e-3);
  }
  SUBCASE("planar cloud embedded in three dimensions") {
    const PointCloud pts = random_cloud(120, 2, 55);
    const ObservationSet obs = sampled_observation(pts, 0.3, 15);
    SolverConfig cfg;
    cfg.seed = 9;
    const auto rec = reconstruct(obs, cfg, 3, false);
    CHECK(rec.points.coords.col(2).norm() < 1e-4);
  }
}

TEST_CASE("solver configuration is validated") {
  SolverConfig cfg;
  cfg.tol = 2.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = SolverConfig{};
  cfg.q = 0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = SolverConfig{};
  cfg.lambda = -1.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
}
