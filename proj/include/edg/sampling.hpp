#pragma once

#include "edg/types.hpp"

#include <cstdint>
#include <vector>

namespace edg {

/// Draw m pairs uniformly from the n(n-1)/2 distinct index pairs.
/// With replacement the result is an i.i.d. sequence; without replacement
/// it has no duplicates and requires m <= L. Order of draws is preserved.
std::vector<IndexPair> sample_pairs(int n, std::int64_t m,
                                    bool with_replacement,
                                    std::uint64_t seed);

/// Look up the squared distances at the given pairs.
ObservationSet observe(const SquaredDistanceMatrix& d,
                       const std::vector<IndexPair>& pairs,
                       bool with_replacement = false);

enum class ClampPolicy {
  kClampToZero,      // negative noisy values become 0
  kRejectAndRedraw,  // redraw the noise until the value is nonnegative
};

/// Additive Gaussian corruption model. The convention from the noisy
/// experiments: sigma is the smallest nonzero observed squared distance
/// and mu = 3 sigma, which keeps negative outcomes rare.
struct NoiseModel {
  double mu = 0.0;
  double sigma = 0.0;
  ClampPolicy clamp = ClampPolicy::kClampToZero;
};

/// sigma = smallest positive observed value, mu = 3 sigma.
/// Throws if every observation is zero.
NoiseModel derive_noise_model(const ObservationSet& obs);

/// Add an independent N(mu, sigma^2) draw to every observed value.
/// Pairs and ordering are untouched; negatives handled per the policy.
ObservationSet corrupt(const ObservationSet& obs, const NoiseModel& model,
                       std::uint64_t seed);

}  // namespace edg
