#pragma once

#include <cstdint>

namespace chaincert {

// SplitMix64: counter-based, splittable, identical output on every platform.
// Distribution helpers are hand-rolled because the std:: distributions are
// implementation-defined, which would break byte-reproducible fuzzing.
struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in (0, 1): the +1 keeps log() safe.
  double u01() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

  // Uniform in {0, ..., bound-1}; modulo bias is irrelevant at these sizes.
  std::uint64_t below(std::uint64_t bound) { return next() % bound; }
};

// Derives an independent stream for (seed, index) pairs so parallel or
// partial fuzzing batches see exactly the same chains.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 rng(seed ^ (0x9e3779b97f4a7c15ULL + index * 0xda942042e4dd58b5ULL));
  rng.next();
  return rng.next();
}

}  // namespace chaincert
