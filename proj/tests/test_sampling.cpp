#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "edg/basis.hpp"
#include "edg/geometry.hpp"
#include "edg/sampling.hpp"
#include "helpers.hpp"

#include <algorithm>
#include <cmath>

using namespace edg;

TEST_CASE("pair sampling") {
  SUBCASE("exhaustive draw without replacement is a permutation") {
    const auto pairs = sample_pairs(3, 3, false, 7);
    REQUIRE(pairs.size() == 3);
    std::vector<std::int64_t> seen;
    for (const auto& p : pairs) seen.push_back(pair_index(p, 3));
    std::sort(seen.begin(), seen.end());
    CHECK(seen == std::vector<std::int64_t>{0, 1, 2});
  }
  SUBCASE("no duplicates without replacement") {
    const auto pairs = sample_pairs(30, 200, false, 3);
    std::vector<std::int64_t> seen;
    for (const auto& p : pairs) seen.push_back(pair_index(p, 30));
    std::sort(seen.begin(), seen.end());
    CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
  }
  SUBCASE("with-replacement frequencies look uniform") {
    const int n = 100;
    const std::int64_t m = 100000;
    const auto pairs = sample_pairs(n, m, true, 99);
    std::vector<std::int64_t> counts(static_cast<std::size_t>(num_pairs(n)),
                                     0);
    for (const auto& p : pairs)
      ++counts[static_cast<std::size_t>(pair_index(p, n))];
    // Each count is Binomial(m, 1/L). Across ~5000 bins a per-bin 4-sigma
    // check would fail by multiplicity, so bound the chi-square statistic
    // near its expectation and every bin at 5 sigma.
    const double l = static_cast<double>(num_pairs(n));
    const double mean = static_cast<double>(m) / l;
    const double sd = std::sqrt(mean * (1.0 - 1.0 / l));
    double chi2 = 0.0;
    for (std::int64_t c : counts) {
      const double dev = static_cast<double>(c) - mean;
      chi2 += dev * dev / mean;
      CHECK(std::abs(dev) <= 5.0 * sd);
    }
    const double dof = l - 1.0;
    CHECK(std::abs(chi2 - dof) <= 5.0 * std::sqrt(2.0 * dof));
  }
  SUBCASE("same seed, same sequence") {
    const auto a = sample_pairs(40, 500, true, 1234);
    const auto b = sample_pairs(40, 500, true, 1234);
    CHECK(a == b);
  }
  SUBCASE("m bounds") {
    CHECK_THROWS_AS(sample_pairs(3, 4, false, 0), InvalidArgument);
    CHECK_THROWS_AS(sample_pairs(3, 0, true, 0), InvalidArgument);
  }
}

TEST_CASE("observing a distance matrix") {
  const PointCloud pts = testing::random_cloud(9, 3, 2);
  const auto d = distance_matrix_from_points(pts);
  const auto g = center_gram_from_points(pts);

  SUBCASE("full enumeration walks the strict upper triangle") {
    std::vector<IndexPair> pairs;
    for (std::int64_t k = 0; k < num_pairs(9); ++k)
      pairs.push_back(pair_at(k, 9));
    const ObservationSet obs = observe(d, pairs);
    for (std::int64_t k = 0; k < obs.size(); ++k) {
      const IndexPair p = pair_at(k, 9);
      CHECK(obs.values[k] == d.values(p.i, p.j));
    }
  }
  SUBCASE("duplicated pair duplicates the value") {
    const ObservationSet obs = observe(d, {{1, 4}, {1, 4}}, true);
    CHECK(obs.values[0] == obs.values[1]);
  }
  SUBCASE("observed distances equal basis measurements of the Gram") {
    const auto pairs = sample_pairs(9, 15, true, 4);
    const ObservationSet obs = observe(d, pairs, true);
    const Vector via_gram = measure(g.values, obs);
    CHECK((via_gram - obs.values).cwiseAbs().maxCoeff() <= 1e-12);
  }
  SUBCASE("out-of-range pair") {
    CHECK_THROWS_AS(observe(d, {{0, 9}}), InvalidArgument);
  }
}

TEST_CASE("noise model derivation") {
  ObservationSet obs;
  obs.n = 3;
  obs.pairs = {{0, 1}, {0, 2}, {1, 2}};
  obs.values.resize(3);

  obs.values << 1.0, 4.0, 9.0;
  NoiseModel m = derive_noise_model(obs);
  CHECK(m.sigma == 1.0);
  CHECK(m.mu == 3.0);

  obs.values << 0.0, 2.0, 2.0;
  m = derive_noise_model(obs);
  CHECK(m.sigma == 2.0);
  CHECK(m.mu == 6.0);

  obs.values.setZero();
  CHECK_THROWS_AS(derive_noise_model(obs), InvalidArgument);
}

TEST_CASE("corruption") {
  ObservationSet obs;
  obs.n = 20;
  obs.pairs = sample_pairs(20, 50, true, 8);
  obs.values = testing::random_vector(50, 3).cwiseAbs();
  obs.with_replacement = true;

  SUBCASE("zero noise is the identity") {
    const ObservationSet out = corrupt(obs, {0.0, 0.0}, 5);
    CHECK((out.values - obs.values).cwiseAbs().maxCoeff() == 0.0);
    CHECK(out.pairs == obs.pairs);
  }
  SUBCASE("pure shift") {
    const ObservationSet out = corrupt(obs, {2.5, 0.0}, 5);
    const Vector shifted = obs.values.array() + 2.5;
    CHECK((out.values - shifted).cwiseAbs().maxCoeff() <= 1e-15);
  }
  SUBCASE("pairs, ordering and length preserved") {
    const NoiseModel model = derive_noise_model(obs);
    const ObservationSet out = corrupt(obs, model, 5);
    CHECK(out.pairs == obs.pairs);
    CHECK(out.size() == obs.size());
  }
  SUBCASE("determinism") {
    const NoiseModel model = derive_noise_model(obs);
    const ObservationSet a = corrupt(obs, model, 5);
    const ObservationSet b = corrupt(obs, model, 5);
    CHECK((a.values - b.values).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("noise statistics over many draws") {
  ObservationSet obs;
  obs.n = 2;
  const std::size_t count = 100000;
  obs.pairs.assign(count, {0, 1});
  obs.values = Vector::Constant(static_cast<Index>(count), 10.0);
  obs.with_replacement = true;

  const double mu = 0.7, sigma = 0.2;
  const ObservationSet out = corrupt(obs, {mu, sigma}, 321);
  const Vector noise = out.values.array() - 10.0;
  const double mean = noise.mean();
  const double var = (noise.array() - mean).square().sum() / (count - 1);
  CHECK(std::abs(mean - mu) <= 0.01 * mu);
  CHECK(std::abs(std::sqrt(var) - sigma) <= 0.01 * sigma);
}

TEST_CASE("three-sigma mean keeps negatives rare") {
  // With mu = 3 sigma, a negative outcome needs a draw below -3 standard
  // deviations even for a zero value, so well under 0.2% pre-clamp.
  ObservationSet obs;
  obs.n = 2;
  const std::size_t count = 1000000;
  obs.pairs.assign(count, {0, 1});
  obs.values = Vector::Zero(static_cast<Index>(count));
  obs.with_replacement = true;

  const double sigma = 0.37;
  NoiseModel model{3.0 * sigma, sigma, ClampPolicy::kClampToZero};
  const ObservationSet out = corrupt(obs, model, 777);
  std::size_t clamped = 0;
  for (Index k = 0; k < out.values.size(); ++k)
    if (out.values[k] == 0.0) ++clamped;
  CHECK(static_cast<double>(clamped) / static_cast<double>(count) < 0.002);

  model.clamp = ClampPolicy::kRejectAndRedraw;
  const ObservationSet redraw = corrupt(obs, model, 778);
  CHECK(redraw.values.minCoeff() >= 0.0);
}
