#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "simspace/core.hpp"

namespace simspace {

/// SplitMix64 output mix (Steele, Lea & Flood). Used for seeding and for
/// seed derivation.
std::uint64_t splitmix64_mix(std::uint64_t x);

/// 64-bit FNV-1a hash of a label.
std::uint64_t fnv1a64(std::string_view label);

/// Child seed for a named sub-stream:
///   splitmix64_mix(seed ^ splitmix64_mix(fnv1a64(label)))
/// Every stochastic operation derives its streams this way, so results do not
/// depend on scheduling order.
Seed derive_seed(Seed parent, std::string_view label);

/// xoshiro256** (Blackman & Vigna), state filled from consecutive SplitMix64
/// outputs of the seed. All distributions below are implemented here rather
/// than through <random> so the streams are identical on every platform.
class Rng {
 public:
  explicit Rng(Seed seed);

  std::uint64_t next_u64();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  /// Uniform integer on [0, n), unbiased (Lemire's multiply-and-reject).
  std::uint64_t below(std::uint64_t n);
  /// Standard normal by Box-Muller; consumes two uniforms per call.
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }
  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::array<std::uint64_t, 4> state_{};
};

}  // namespace simspace
