#pragma once

#include <cstdint>
#include <vector>

#include "bsfw/errors.hpp"

namespace bsfw {

// Deterministic pseudorandom stream (xoshiro256**). All randomness in the
// toolkit flows through this type so that traces are reproducible across
// platforms; the standard <random> distributions are implementation-defined
// and are deliberately not used.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    // splitmix64 expansion of the seed into the state.
    std::uint64_t z = seed;
    for (auto& s : state_) {
      z += 0x9e3779b97f4a7c15ULL;
      std::uint64_t w = z;
      w = (w ^ (w >> 30)) * 0xbf58476d1ce4e5b9ULL;
      w = (w ^ (w >> 27)) * 0x94d049bb133111ebULL;
      s = w ^ (w >> 31);
    }
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform double in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform index in [0, n) via rejection sampling (no modulo bias).
  std::uint64_t next_index(std::uint64_t n) {
    if (n == 0) throw ConfigError("next_index: n must be positive");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t r = next_u64();
    while (r >= limit) r = next_u64();
    return r % n;
  }

  bool next_bernoulli(double p) { return next_double() < p; }

  // Standard normal via Box-Muller; consumes two uniforms per value.
  double next_gaussian();

  // Sorted uniform sample of k distinct indices from [0, n).
  std::vector<int> sample_without_replacement(int n, int k);

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t state_[4];
};

}  // namespace bsfw
