#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace plscore {

using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of an independent child stream identified by `keys` under `seed`.
/// Streams depend only on (seed, keys), never on scheduling.
inline std::uint64_t child_seed(std::uint64_t seed,
                                std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = splitmix64(seed);
  for (auto k : keys) h = splitmix64(h ^ splitmix64(k + 0x632be59bd9b4e019ULL));
  return h;
}

inline Rng make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
  return Rng(child_seed(seed, keys));
}

}  // namespace plscore
