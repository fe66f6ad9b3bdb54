#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace hpi {

// Unbiased uniform draw in [0, bound) from a 64-bit generator. Avoids
// std::uniform_int_distribution, whose output differs across standard
// libraries; results must be reproducible from the seed alone.
inline std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t bound) {
  std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    std::uint64_t v = rng();
    if (v >= threshold) return v % bound;
  }
}

template <typename T>
void shuffle_values(std::vector<T>& values, std::mt19937_64& rng) {
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    std::uint64_t j = i + uniform_index(rng, values.size() - i);
    std::swap(values[i], values[j]);
  }
}

// Stable 64-bit mix for deriving per-task seeds from a base seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace hpi
