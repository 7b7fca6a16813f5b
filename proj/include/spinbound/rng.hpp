#pragma once

#include <cstdint>
#include <random>

namespace spinbound {

// SplitMix64 step (Steele, Lea, Flood 2014). Used only to derive seeds.
inline std::uint64_t split_mix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Replica streams: stream i is seeded by two SplitMix64 rounds of
// master_seed + (i+1)*golden_ratio. Independent of scheduling, so a run is
// reproducible for a fixed master seed regardless of the worker count.
inline std::mt19937_64 make_stream(std::uint64_t master_seed,
                                   std::uint64_t stream_index) {
  std::uint64_t s = master_seed + (stream_index + 1) * 0x9E3779B97F4A7C15ULL;
  (void)split_mix64(s);
  return std::mt19937_64(split_mix64(s));
}

inline double uniform01(std::mt19937_64& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace spinbound
