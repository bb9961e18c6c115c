#pragma once

#include <cstdint>
#include <random>

namespace cs2d {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

using Rng = std::mt19937_64;

/// Generator for stream `stream` of a run seeded with `base_seed`.
inline Rng make_rng(std::uint64_t base_seed, std::uint64_t stream = 0) {
  return Rng(splitmix64(base_seed + stream));
}

}  // namespace cs2d
