#pragma once

#include <cstdint>

namespace orthocycle {

// SplitMix64 (Steele/Lea/Flood). Used instead of <random> engines because
// reports must be byte-identical across platforms and standard-library
// versions for a fixed seed; distribution adapters in libstdc++/libc++ carry
// no such guarantee.
struct SplitMix64 {
  std::uint64_t state = 0;

  constexpr explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  constexpr std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0,1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Integer in [0,n) via the multiply-shift reduction (n is tiny here, so the
  // bias of the plain reduction is < 2^-60 and irrelevant; this keeps it 0).
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }
};

// Stateless mix of (seed, index); backs reproducible bi-infinite symbol tapes
// and per-worker seed derivation.
constexpr std::uint64_t hash_mix(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace orthocycle
