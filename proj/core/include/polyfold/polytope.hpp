#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "polyfold/error.hpp"
#include "polyfold/matrix.hpp"
#include "polyfold/scalar.hpp"

namespace polyfold {

// A d-dimensional point. The scalar type fixes the mode, so mixing exact
// and floating coordinates does not compile.
template <class S>
using Point = std::vector<S>;

template <class S>
struct Point2 {
  S x;
  S y;

  bool operator==(const Point2&) const = default;
};

template <class S>
S cross(const Point2<S>& o, const Point2<S>& a, const Point2<S>& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Strictly convex polygon with counter-clockwise vertices.
template <class S>
class Polygon {
 public:
  static constexpr ScalarMode mode = ScalarTraits<S>::mode;

  // Throws Error(invalid_input) unless the vertices are at least three,
  // pairwise distinct, strictly convex, counter-clockwise and wind once.
  explicit Polygon(std::vector<Point2<S>> vertices);

  const std::vector<Point2<S>>& vertices() const noexcept { return vertices_; }
  std::size_t size() const noexcept { return vertices_.size(); }
  const Point2<S>& vertex(std::size_t i) const { return vertices_[i]; }

  // Twice the signed area.
  S doubled_area() const;

  std::vector<Point<S>> vertex_points() const;

 private:
  std::vector<Point2<S>> vertices_;
};

// Facet description A x <= b.
template <class S>
struct LinearSystem {
  Matrix<S> A;
  std::vector<S> b;

  std::size_t rows() const noexcept { return A.rows(); }
  std::size_t dim() const noexcept { return A.cols(); }
};

// Validates shapes and the no-zero-row invariant.
template <class S>
void check_linear_system(const LinearSystem<S>& h);

template <class S>
bool satisfies(const LinearSystem<S>& h, std::span<const S> x);

inline constexpr int kPermutahedronCap = 8;

// The n-permutahedron: convex hull of all permutations of (1, ..., n).
struct Permutahedron {
  int n = 0;

  explicit Permutahedron(int size);

  std::size_t vertex_count() const;
  std::size_t facet_count() const { return (std::size_t{1} << n) - 2; }
};

// Regular n-gon with circumradius 1, barycenter at the origin and v_j at
// angle 2*pi*j/n (0-based). Only float64 mode is representable.
Polygon<double> make_regular_ngon(int n, ScalarMode mode = ScalarMode::float64);

// Vertex j (0-based) of the regular n-gon above.
Point2<double> regular_ngon_vertex(int n, int j);

// One outer facet row per edge (v_i, v_{i+1}). Rational mode yields primitive
// integer rows; float mode scales rows to b_i = 1 when the origin is interior
// and to unit normals otherwise.
template <class S>
LinearSystem<S> polygon_to_hrep(const Polygon<S>& polygon);

// Either an explicit subset of {1, ..., 2n} or a seed for a uniform choice.
using ParabolaSelector = std::variant<std::vector<int>, std::uint64_t>;

std::vector<int> random_parabola_subset(int n, std::uint64_t seed);

// Polygon on the points (z, z^2) for z in the selected subset of {1..2n}.
Polygon<Rational> make_grid_parabola_polygon(int n, const ParabolaSelector& selector);

// Lexicographic stream over the permutations of (1, ..., n).
class PermutahedronVertexStream {
 public:
  explicit PermutahedronVertexStream(const Permutahedron& k, int cap = kPermutahedronCap);

  // Writes the next vertex into out; returns false once exhausted.
  bool next(std::vector<int>& out);

 private:
  std::vector<int> current_;
  bool done_ = false;
};

std::vector<std::vector<int>> permutahedron_vertex_list(const Permutahedron& k,
                                                        int cap = kPermutahedronCap);
std::vector<Point<Rational>> permutahedron_vertices(const Permutahedron& k,
                                                    int cap = kPermutahedronCap);

// g(s) = C(n+1, 2) - C(n-s+1, 2).
long permutahedron_rhs(int n, int subset_size);

// Proper non-empty subsets of {0, ..., n-1}, by size then lexicographic.
std::vector<std::vector<int>> permutahedron_facet_subsets(int n);

LinearSystem<Rational> permutahedron_hrep(const Permutahedron& k, int cap = kPermutahedronCap);

}  // namespace polyfold
