#pragma once

#include <cstdint>
#include <vector>

#include "filtlab/errors.hpp"
#include "filtlab/scalar.hpp"

namespace filtlab {

// Counter-based generator: every draw is a pure hash of
// (seed, stream, sample index, draw index), so sampling is reproducible and
// order-independent no matter how the sample loop is scheduled.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct RngKey {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;  // e.g. level index
  std::uint64_t sample = 0;
  std::uint64_t draw = 0;

  std::uint64_t hash() const {
    std::uint64_t h = splitmix64(seed ^ 0x243f6a8885a308d3ULL);
    h = splitmix64(h ^ stream);
    h = splitmix64(h ^ sample);
    h = splitmix64(h ^ draw);
    return h;
  }
};

inline double uniform01(const RngKey& key) {
  return static_cast<double>(key.hash() >> 11) * 0x1.0p-53;
}

// Inverse-CDF draw from a finite distribution. Weights are converted to
// double for the draw; ties on bin edges resolve to the lower index.
template <class T>
int sample_index(const std::vector<T>& weights, const RngKey& key) {
  if (weights.empty()) throw Error(ErrorCode::EmptySample, "sampling from empty distribution");
  const double u = uniform01(key);
  double total = 0.0;
  for (const T& w : weights) total += to_double(w);
  if (total <= 0.0) throw Error(ErrorCode::NotNormalized, "sampling from zero-mass distribution");
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += to_double(weights[i]) / total;
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(weights.size()) - 1;
}

}  // namespace filtlab
