#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "polyfold/polytope.hpp"
#include "polyfold/slack.hpp"

namespace polyfold {

// Compare-exchange on positions j < k (0-based): min goes to j, max to k.
struct Comparator {
  std::size_t j = 0;
  std::size_t k = 0;

  bool operator==(const Comparator&) const = default;
};

struct ComparatorNetwork {
  std::size_t n = 0;
  std::vector<Comparator> comparators;

  std::size_t size() const noexcept { return comparators.size(); }
};

// Batcher's odd-even mergesort, generated for the next power of two and
// restricted to the first n wires.
ComparatorNetwork batcher_network(int n);

// 0-1 principle: applies the network to all 2^n binary inputs.
// Throws Error(too_large) for n > 24.
bool sorts_all_binary_inputs(const ComparatorNetwork& network);

// Sorts coordinates j and k; the flag is true when x_j <= x_k already held.
template <class T>
std::pair<std::vector<T>, bool> comparator_conditional_reflect(std::vector<T> x, Comparator c) {
  if (x[c.j] <= x[c.k]) return {std::move(x), true};
  std::swap(x[c.j], x[c.k]);
  return {std::move(x), false};
}

struct PermutahedronFactorization {
  Permutahedron polytope{2};
  ComparatorNetwork network;
  std::vector<std::vector<int>> subsets;   // facet order
  std::vector<std::vector<int>> vertices;  // lexicographic permutations
  LinearSystem<Rational> hrep;
  SlackMatrix<Rational> slack;
  NonnegFactorization<Rational> factorization;

  std::size_t rank() const { return factorization.rank(); }
};

// Exact factorization with one pair of columns per comparator: for facet
// indicator a and vertex v folded in lockstep, comparator i contributes
// |a_j - a_k| * |v_j - v_k| exactly when one of them is swapped and the
// other is not.
PermutahedronFactorization build_permutahedron_factorization(int n, int cap = kPermutahedronCap);

struct ExactTelescopingStep {
  long lhs = 0;
  long rhs = 0;
  long correction = 0;
  bool opposite_sides = false;
};

struct ExactTelescopingReport {
  std::vector<ExactTelescopingStep> steps;
  long initial_slack = 0;
  long final_slack = 0;
  long correction_sum = 0;
  bool pass = false;
};

// Per-comparator slack identity for facet indicator `indicator` with
// right-hand side beta and a vertex, in integer arithmetic.
ExactTelescopingReport permutahedron_telescoping_check(const std::vector<int>& indicator, long beta,
                                                       const std::vector<int>& vertex,
                                                       const ComparatorNetwork& network);

}  // namespace polyfold
