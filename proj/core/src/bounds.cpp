#include "polyfold/bounds.hpp"

#include <algorithm>
#include <bit>
#include <string>
#include <vector>

#include "polyfold/error.hpp"
#include "polyfold/linalg.hpp"

namespace polyfold {

long face_count_lower_bound(std::uint64_t face_count) {
  if (face_count < 1) throw Error(ErrorKind::invalid_input, "face count must be at least 1");
  if (face_count == 1) return 0;
  return static_cast<long>(std::bit_width(face_count - 1));
}

template <>
long linear_rank_lower_bound(const SlackMatrix<Rational>& s) {
  return static_cast<long>(exact_rank(s.entries()));
}

template <>
long linear_rank_lower_bound(const SlackMatrix<double>& s) {
  return static_cast<long>(numerical_rank(s.entries()));
}

std::uint64_t polygon_face_count(int n) {
  if (n < 3) throw Error(ErrorKind::invalid_size, "polygon needs n >= 3, got " + std::to_string(n));
  return 2 * static_cast<std::uint64_t>(n) + 2;
}

std::uint64_t permutahedron_face_count(int n) {
  if (n < 1 || n > 16) throw Error(ErrorKind::invalid_size, "permutahedron face count needs 1 <= n <= 16");
  // Fubini numbers: a(m) = sum_k C(m, k) a(m - k).
  std::vector<std::uint64_t> fub(n + 1, 0);
  std::vector<std::vector<std::uint64_t>> binom(n + 1, std::vector<std::uint64_t>(n + 1, 0));
  for (int i = 0; i <= n; ++i) {
    binom[i][0] = 1;
    for (int j = 1; j <= i; ++j) binom[i][j] = binom[i - 1][j - 1] + (j < i ? binom[i - 1][j] : 0);
  }
  fub[0] = 1;
  for (int m = 1; m <= n; ++m)
    for (int k = 1; k <= m; ++k) fub[m] += binom[m][k] * fub[m - k];
  return fub[n] + 1;
}

template <class S>
BoundsReport compute_bounds(const SlackMatrix<S>& s, std::uint64_t face_count,
                            std::optional<long> construction_rank) {
  BoundsReport r;
  r.face_count_bound = face_count_lower_bound(face_count);
  r.linear_rank_bound = linear_rank_lower_bound(s);
  r.construction_rank = construction_rank;
  if (construction_rank) r.gap = *construction_rank - std::max(r.face_count_bound, r.linear_rank_bound);
  return r;
}

template BoundsReport compute_bounds(const SlackMatrix<double>&, std::uint64_t, std::optional<long>);
template BoundsReport compute_bounds(const SlackMatrix<Rational>&, std::uint64_t, std::optional<long>);

}  // namespace polyfold
