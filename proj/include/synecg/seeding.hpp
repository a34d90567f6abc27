#pragma once

#include <cstdint>
#include <random>

namespace synecg {

using Seed = std::uint64_t;
using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Counter-based split: the seed of item `index` depends only on (master, index),
/// so parallel workers never share generator state.
constexpr Seed derive_seed(Seed master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 0xD1B54A32D192ED03ULL));
}

/// Independent sub-streams of one example.
enum class Stream : std::uint64_t {
  draw = 1,
  rr = 2,
  noise = 3,
  window = 4,
  artefact = 5,
};

constexpr Seed stream_seed(Seed example_seed, Stream stream) {
  return derive_seed(example_seed, static_cast<std::uint64_t>(stream) << 56);
}

inline Rng make_rng(Seed seed) { return Rng(seed); }

}  // namespace synecg
