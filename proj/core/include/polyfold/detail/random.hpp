#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace polyfold::detail {

// Unbiased draw from [0, bound) using only the raw engine output, so results
// are identical across standard library implementations.
inline std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = max - max % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

}  // namespace polyfold::detail
