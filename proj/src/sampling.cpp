#include "edg/sampling.hpp"

#include "edg/basis.hpp"
#include "edg/rng.hpp"

#include <numeric>

namespace edg {

std::vector<IndexPair> sample_pairs(int n, std::int64_t m,
                                    bool with_replacement,
                                    std::uint64_t seed) {
  if (n < 2) throw InvalidArgument("sample_pairs: n must be >= 2");
  if (m < 1) throw InvalidArgument("sample_pairs: m must be >= 1");
  const std::int64_t l = num_pairs(n);
  if (!with_replacement && m > l)
    throw InvalidArgument(
        "sample_pairs: m exceeds the number of distinct pairs");

  Rng rng(seed);
  std::vector<IndexPair> out;
  out.reserve(static_cast<std::size_t>(m));

  if (with_replacement) {
    for (std::int64_t k = 0; k < m; ++k)
      out.push_back(pair_at(static_cast<std::int64_t>(rng.uniform_int(
                                static_cast<std::uint64_t>(l))),
                            n));
    return out;
  }

  // Partial Fisher-Yates over the linear pair indices; the first m slots
  // after shuffling are the draws, in draw order.
  std::vector<std::int64_t> idx(static_cast<std::size_t>(l));
  std::iota(idx.begin(), idx.end(), std::int64_t{0});
  for (std::int64_t k = 0; k < m; ++k) {
    const std::int64_t swap_with =
        k + static_cast<std::int64_t>(
                rng.uniform_int(static_cast<std::uint64_t>(l - k)));
    std::swap(idx[static_cast<std::size_t>(k)],
              idx[static_cast<std::size_t>(swap_with)]);
    out.push_back(pair_at(idx[static_cast<std::size_t>(k)], n));
  }
  return out;
}

ObservationSet observe(const SquaredDistanceMatrix& d,
                       const std::vector<IndexPair>& pairs,
                       bool with_replacement) {
  const int n = static_cast<int>(d.n());
  ObservationSet obs;
  obs.n = n;
  obs.pairs = pairs;
  obs.with_replacement = with_replacement;
  obs.values.resize(static_cast<Index>(pairs.size()));
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    validate_pair(pairs[k], n);
    obs.values[static_cast<Index>(k)] = d.values(pairs[k].i, pairs[k].j);
  }
  return obs;
}

NoiseModel derive_noise_model(const ObservationSet& obs) {
  double min_positive = -1.0;
  for (Index k = 0; k < obs.values.size(); ++k) {
    const double v = obs.values[k];
    if (v > 0.0 && (min_positive < 0.0 || v < min_positive))
      min_positive = v;
  }
  if (min_positive <= 0.0)
    throw InvalidArgument(
        "derive_noise_model: no positive observed value to set sigma");
  return {3.0 * min_positive, min_positive, ClampPolicy::kClampToZero};
}

ObservationSet corrupt(const ObservationSet& obs, const NoiseModel& model,
                       std::uint64_t seed) {
  if (model.sigma < 0.0)
    throw InvalidArgument("corrupt: sigma must be nonnegative");
  Rng rng(seed);
  ObservationSet out = obs;
  for (Index k = 0; k < out.values.size(); ++k) {
    double v = obs.values[k] + model.mu + model.sigma * rng.normal();
    if (v < 0.0) {
      if (model.clamp == ClampPolicy::kClampToZero) {
        v = 0.0;
      } else {
        while (v < 0.0)
          v = obs.values[k] + model.mu + model.sigma * rng.normal();
      }
    }
    out.values[k] = v;
  }
  return out;
}

}  // namespace edg
