#pragma once

#include <cstdint>
#include <optional>

#include "polyfold/slack.hpp"

namespace polyfold {

struct BoundsReport {
  long face_count_bound = 0;
  long linear_rank_bound = 0;
  std::optional<long> construction_rank;
  std::optional<long> gap;  // construction_rank - max(bounds)
};

// ceil(log2 f); f = 1 gives 0. Throws Error(invalid_input) for f < 1.
long face_count_lower_bound(std::uint64_t face_count);

// rank(S) <= nnegrk(S).
template <class S>
long linear_rank_lower_bound(const SlackMatrix<S>& s);

// Vertices, edges, the polygon itself and the empty face.
std::uint64_t polygon_face_count(int n);

// Ordered set partitions of [n] (proper faces plus P), and the empty face.
std::uint64_t permutahedron_face_count(int n);

template <class S>
BoundsReport compute_bounds(const SlackMatrix<S>& s, std::uint64_t face_count,
                            std::optional<long> construction_rank = std::nullopt);

}  // namespace polyfold
