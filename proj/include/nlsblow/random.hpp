#pragma once

#include <cstdint>
#include <random>

namespace nlsblow {

/// SplitMix64 finalizer; derives independent seeds for substreams.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Engine for substream `stream` of a run seeded with `seed`. Results depend
/// only on (seed, stream), never on scheduling.
inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64(mix_seed(seed ^ mix_seed(stream)));
}

} // namespace nlsblow
