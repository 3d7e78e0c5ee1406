#include "polyfold/polytope.hpp"

#include "polyfold/detail/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <limits>
#include <string>

namespace polyfold {

namespace {

template <class S>
bool positive_turn(const Point2<S>& o, const Point2<S>& a, const Point2<S>& b, double scale) {
  S c = cross(o, a, b);
  if constexpr (is_exact_v<S>) {
    (void)scale;
    return c > 0;
  } else {
    // A few ulps of the coordinate scale: turns of the 2^16-gon are ~1e-12.
    return c > 16 * std::numeric_limits<double>::epsilon() * scale;
  }
}

// Half-plane class of an edge direction; a strictly convex polygon's edge
// directions wrap past angle 0 exactly once.
template <class S>
int direction_half(const Point2<S>& from, const Point2<S>& to) {
  S dx = to.x - from.x;
  S dy = to.y - from.y;
  if (dy > 0 || (dy == 0 && dx > 0)) return 0;
  return 1;
}

}  // namespace

template <class S>
Polygon<S>::Polygon(std::vector<Point2<S>> vertices) : vertices_(std::move(vertices)) {
  const std::size_t n = vertices_.size();
  if (n < 3) {
    throw Error(ErrorKind::invalid_input, "polygon needs at least 3 vertices, got " + std::to_string(n));
  }
  double scale = 0.0;
  for (const auto& v : vertices_) {
    scale = std::max({scale, std::fabs(to_double(v.x)), std::fabs(to_double(v.y))});
  }
  scale = std::max(scale * scale, 1e-300);

  std::vector<Point2<S>> sorted = vertices_;
  std::sort(sorted.begin(), sorted.end(), [](const Point2<S>& a, const Point2<S>& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorKind::invalid_input, "polygon has repeated vertices");
  }

  std::size_t wraps = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = vertices_[i];
    const auto& b = vertices_[(i + 1) % n];
    const auto& c = vertices_[(i + 2) % n];
    if (!positive_turn(a, b, c, scale)) {
      throw Error(ErrorKind::invalid_input,
                  "polygon is not strictly convex and counter-clockwise at vertex " +
                      std::to_string((i + 1) % n));
    }
    if (direction_half(a, b) == 1 && direction_half(b, c) == 0) ++wraps;
  }
  if (wraps != 1) {
    throw Error(ErrorKind::invalid_input, "polygon winds " + std::to_string(wraps) + " times");
  }
  if (!(doubled_area() > 0)) {
    throw Error(ErrorKind::invalid_input, "polygon has non-positive signed area");
  }
}

template <class S>
S Polygon<S>::doubled_area() const {
  S acc(0);
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = vertices_[i];
    const auto& b = vertices_[(i + 1) % n];
    acc += a.x * b.y - a.y * b.x;
  }
  return acc;
}

template <class S>
std::vector<Point<S>> Polygon<S>::vertex_points() const {
  std::vector<Point<S>> out;
  out.reserve(vertices_.size());
  for (const auto& v : vertices_) out.push_back({v.x, v.y});
  return out;
}

template class Polygon<double>;
template class Polygon<Rational>;

template <class S>
void check_linear_system(const LinearSystem<S>& h) {
  if (h.A.rows() != h.b.size()) {
    throw Error(ErrorKind::invalid_input, "linear system: A has " + std::to_string(h.A.rows()) +
                                              " rows but b has " + std::to_string(h.b.size()));
  }
  for (std::size_t i = 0; i < h.A.rows(); ++i) {
    auto row = h.A.row(i);
    if (std::all_of(row.begin(), row.end(), [](const S& x) { return x == 0; })) {
      throw Error(ErrorKind::invalid_input, "linear system: row " + std::to_string(i) + " is zero");
    }
  }
}

template <class S>
bool satisfies(const LinearSystem<S>& h, std::span<const S> x) {
  for (std::size_t i = 0; i < h.rows(); ++i) {
    if (dot<S>(h.A.row(i), x) > h.b[i]) return false;
  }
  return true;
}

template void check_linear_system(const LinearSystem<double>&);
template void check_linear_system(const LinearSystem<Rational>&);
template bool satisfies(const LinearSystem<double>&, std::span<const double>);
template bool satisfies(const LinearSystem<Rational>&, std::span<const Rational>);

Permutahedron::Permutahedron(int size) : n(size) {
  if (size < 2) throw Error(ErrorKind::invalid_size, "permutahedron needs n >= 2");
  if (size > 30) throw Error(ErrorKind::too_large, "permutahedron facet count overflows for n > 30");
}

std::size_t Permutahedron::vertex_count() const {
  std::size_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::size_t>(i);
  return f;
}

Point2<double> regular_ngon_vertex(int n, int j) {
  j %= n;
  // Axis-aligned vertices are placed exactly so symmetric inputs stay symmetric.
  if (j == 0) return {1.0, 0.0};
  if (2 * j == n) return {-1.0, 0.0};
  if (4 * j == n) return {0.0, 1.0};
  if (4 * j == 3 * n) return {0.0, -1.0};
  double angle = 2.0 * std::numbers::pi * j / n;
  return {std::cos(angle), std::sin(angle)};
}

Polygon<double> make_regular_ngon(int n, ScalarMode mode) {
  if (n < 3) throw Error(ErrorKind::invalid_size, "regular n-gon needs n >= 3, got " + std::to_string(n));
  if (mode != ScalarMode::float64) {
    throw Error(ErrorKind::unsupported_mode, "regular n-gon vertices are irrational; use float64");
  }
  std::vector<Point2<double>> v;
  v.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) v.push_back(regular_ngon_vertex(n, j));
  return Polygon<double>(std::move(v));
}

namespace {

LinearSystem<Rational> rational_hrep(const Polygon<Rational>& p) {
  const std::size_t n = p.size();
  LinearSystem<Rational> h{Matrix<Rational>(n, 2), std::vector<Rational>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = p.vertex(i);
    const auto& b = p.vertex((i + 1) % n);
    Rational nx = b.y - a.y;
    Rational ny = a.x - b.x;
    Rational rhs = nx * a.x + ny * a.y;
    // Clear denominators, then divide out the content of the row.
    Integer l = 1;
    for (const Rational* q : {&nx, &ny, &rhs}) {
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q->get_den_mpz_t());
    }
    Integer inx = Integer(nx * l), iny = Integer(ny * l), irhs = Integer(rhs * l);
    Integer g = gcd(gcd(inx, iny), irhs);
    if (g == 0) g = 1;
    h.A(i, 0) = Rational(inx / g);
    h.A(i, 1) = Rational(iny / g);
    h.b[i] = Rational(irhs / g);
  }
  return h;
}

LinearSystem<double> float_hrep(const Polygon<double>& p) {
  const std::size_t n = p.size();
  LinearSystem<double> h{Matrix<double>(n, 2), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = p.vertex(i);
    const auto& b = p.vertex((i + 1) % n);
    double nx = b.y - a.y;
    double ny = a.x - b.x;
    double len = std::hypot(nx, ny);
    nx /= len;
    ny /= len;
    // Averaging both endpoints keeps the row symmetric in the edge.
    double rhs = 0.5 * (nx * (a.x + b.x) + ny * (a.y + b.y));
    double scale = rhs > 1e-12 ? 1.0 / rhs : 1.0;
    h.A(i, 0) = nx * scale;
    h.A(i, 1) = ny * scale;
    h.b[i] = rhs > 1e-12 ? 1.0 : rhs;
  }
  return h;
}

}  // namespace

template <>
LinearSystem<Rational> polygon_to_hrep(const Polygon<Rational>& polygon) {
  return rational_hrep(polygon);
}

template <>
LinearSystem<double> polygon_to_hrep(const Polygon<double>& polygon) {
  return float_hrep(polygon);
}

std::vector<int> random_parabola_subset(int n, std::uint64_t seed) {
  if (n < 3) throw Error(ErrorKind::invalid_size, "parabola polygon needs n >= 3");
  std::mt19937_64 rng(seed);
  std::vector<int> pool(static_cast<std::size_t>(2 * n));
  std::iota(pool.begin(), pool.end(), 1);
  // Partial Fisher-Yates driven by the raw engine output.
  for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
    std::size_t j = i + static_cast<std::size_t>(detail::uniform_index(rng, pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  std::vector<int> out(pool.begin(), pool.begin() + n);
  std::sort(out.begin(), out.end());
  return out;
}

Polygon<Rational> make_grid_parabola_polygon(int n, const ParabolaSelector& selector) {
  if (n < 3) throw Error(ErrorKind::invalid_size, "parabola polygon needs n >= 3, got " + std::to_string(n));
  std::vector<int> subset;
  if (const auto* explicit_subset = std::get_if<std::vector<int>>(&selector)) {
    subset = *explicit_subset;
    if (subset.size() != static_cast<std::size_t>(n)) {
      throw Error(ErrorKind::invalid_selector, "subset must have exactly " + std::to_string(n) + " elements");
    }
    std::sort(subset.begin(), subset.end());
    if (std::adjacent_find(subset.begin(), subset.end()) != subset.end()) {
      throw Error(ErrorKind::invalid_selector, "subset elements must be distinct");
    }
    if (subset.front() < 1 || subset.back() > 2 * n) {
      throw Error(ErrorKind::invalid_selector,
                  "subset elements must lie in [1, " + std::to_string(2 * n) + "]");
    }
  } else {
    subset = random_parabola_subset(n, std::get<std::uint64_t>(selector));
  }
  std::vector<Point2<Rational>> v;
  v.reserve(subset.size());
  for (int z : subset) v.push_back({Rational(z), Rational(static_cast<long>(z) * z)});
  if (cross(v[0], v[1], v[2]) < 0) std::reverse(v.begin(), v.end());
  return Polygon<Rational>(std::move(v));
}

PermutahedronVertexStream::PermutahedronVertexStream(const Permutahedron& k, int cap) {
  if (k.n > cap) {
    throw Error(ErrorKind::too_large, "permutahedron n=" + std::to_string(k.n) +
                                          " exceeds enumeration cap " + std::to_string(cap));
  }
  current_.resize(static_cast<std::size_t>(k.n));
  std::iota(current_.begin(), current_.end(), 1);
}

bool PermutahedronVertexStream::next(std::vector<int>& out) {
  if (done_) return false;
  out = current_;
  done_ = !std::next_permutation(current_.begin(), current_.end());
  return true;
}

std::vector<std::vector<int>> permutahedron_vertex_list(const Permutahedron& k, int cap) {
  PermutahedronVertexStream stream(k, cap);
  std::vector<std::vector<int>> out;
  out.reserve(k.vertex_count());
  std::vector<int> v;
  while (stream.next(v)) out.push_back(v);
  return out;
}

std::vector<Point<Rational>> permutahedron_vertices(const Permutahedron& k, int cap) {
  std::vector<Point<Rational>> out;
  for (const auto& perm : permutahedron_vertex_list(k, cap)) {
    Point<Rational> p;
    p.reserve(perm.size());
    for (int c : perm) p.emplace_back(c);
    out.push_back(std::move(p));
  }
  return out;
}

long permutahedron_rhs(int n, int subset_size) {
  auto choose2 = [](long m) { return m * (m - 1) / 2; };
  return choose2(n + 1) - choose2(n - subset_size + 1);
}

std::vector<std::vector<int>> permutahedron_facet_subsets(int n) {
  std::vector<std::vector<int>> out;
  for (int size = 1; size < n; ++size) {
    // Lexicographic combinations of {0..n-1} of the given size.
    std::vector<int> comb(static_cast<std::size_t>(size));
    std::iota(comb.begin(), comb.end(), 0);
    while (true) {
      out.push_back(comb);
      int i = size - 1;
      while (i >= 0 && comb[static_cast<std::size_t>(i)] == n - size + i) --i;
      if (i < 0) break;
      ++comb[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < size; ++j) {
        comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
      }
    }
  }
  return out;
}

LinearSystem<Rational> permutahedron_hrep(const Permutahedron& k, int cap) {
  if (k.n > cap) {
    throw Error(ErrorKind::too_large, "permutahedron n=" + std::to_string(k.n) +
                                          " exceeds enumeration cap " + std::to_string(cap));
  }
  auto subsets = permutahedron_facet_subsets(k.n);
  LinearSystem<Rational> h{Matrix<Rational>(subsets.size(), static_cast<std::size_t>(k.n)),
                           std::vector<Rational>(subsets.size())};
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    for (int j : subsets[i]) h.A(i, static_cast<std::size_t>(j)) = 1;
    h.b[i] = permutahedron_rhs(k.n, static_cast<int>(subsets[i].size()));
  }
  return h;
}

}  // namespace polyfold
