// Seedable PRNG used everywhere randomness is needed.
//
// SplitMix64 (Steele, Lea, Flood) instead of std::mt19937: the standard
// distributions are not bit-reproducible across standard libraries, and every
// run in this project must replay exactly from its seed on any platform.

#pragma once

#include <cassert>
#include <cstdint>

namespace staterep {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Unbiased integer in [0, bound) by rejection.
  std::uint64_t next_below(std::uint64_t bound) {
    assert(bound > 0);
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  int next_index(int bound) { return static_cast<int>(next_below(static_cast<std::uint64_t>(bound))); }

  // Uniform double in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool next_bernoulli(double p) { return next_double() < p; }

 private:
  std::uint64_t state_;
};

// Deterministic combination of a root seed and a stream index, for deriving
// independent sub-streams (worker batches, retry attempts, phases).
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream) {
  SplitMix64 g(root ^ (stream + 0x9E3779B97F4A7C15ULL) * 0xBF58476D1CE4E5B9ULL);
  return g.next();
}

}  // namespace staterep
