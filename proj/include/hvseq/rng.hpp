#pragma once

#include <cstdint>

namespace hvseq {

// SplitMix64. Used for every seeded draw in the library instead of <random>
// engines/distributions, whose output is implementation-defined; identical
// seeds must give bit-identical encodings on any toolchain.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform draw from [0, bound), bound > 0. Rejection sampling on the
  // biased tail keeps the distribution exact.
  constexpr std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  // Uniform double in [0, 1).
  constexpr double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

// Avalanched seed combiner for independent derived streams.
constexpr std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a ^ (b + 0x9E3779B97F4A7C15ULL + (a << 6) + (a >> 2));
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return mix_seed(mix_seed(a, b), c);
}

// Stream tags: keep atom draws, the permutation shuffle, and the
// partial-permutation priority order decorrelated under one master seed.
inline constexpr std::uint64_t kAtomStream = 0x41544F4D00ULL;
inline constexpr std::uint64_t kPermStream = 0x5045524D00ULL;
inline constexpr std::uint64_t kPriorityStream = 0x5052494F00ULL;

}  // namespace hvseq
