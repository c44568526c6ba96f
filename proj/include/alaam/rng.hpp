#pragma once

#include <cstdint>
#include <random>

namespace alaam {

using Rng = std::mt19937_64;

// Derives an independent stream seed from a base seed.  splitmix64 finalizer;
// distinct streams stay decorrelated even for adjacent base seeds.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline double uniform01(Rng& rng) {
  // 53-bit mantissa draw in [0,1)
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace alaam
