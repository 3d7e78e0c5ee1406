#include "polyfold/permutahedron_folding.hpp"

#include <cstdlib>
#include <numeric>
#include <string>

#include "polyfold/error.hpp"

namespace polyfold {

ComparatorNetwork batcher_network(int n) {
  if (n < 2) throw Error(ErrorKind::invalid_size, "sorting network needs n >= 2, got " + std::to_string(n));
  const std::size_t wires = static_cast<std::size_t>(n);
  std::size_t padded = 1;
  while (padded < wires) padded <<= 1;

  ComparatorNetwork net{wires, {}};
  for (std::size_t p = 1; p < padded; p <<= 1) {
    for (std::size_t k = p; k >= 1; k >>= 1) {
      for (std::size_t j = k % p; j + k < padded; j += 2 * k) {
        for (std::size_t i = 0; i < k && i + j + k < padded; ++i) {
          if ((i + j) / (2 * p) != (i + j + k) / (2 * p)) continue;
          const std::size_t lo = i + j;
          const std::size_t hi = i + j + k;
          // Padding wires carry +infinity, so comparators touching them never swap.
          if (hi < wires) net.comparators.push_back({lo, hi});
        }
      }
    }
  }
  return net;
}

bool sorts_all_binary_inputs(const ComparatorNetwork& network) {
  if (network.n > 24) throw Error(ErrorKind::too_large, "0-1 check is limited to n <= 24");
  const std::size_t n = network.n;
  std::vector<int> x(n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    for (std::size_t b = 0; b < n; ++b) x[b] = static_cast<int>((mask >> b) & 1U);
    for (const auto& c : network.comparators) {
      if (x[c.j] > x[c.k]) std::swap(x[c.j], x[c.k]);
    }
    for (std::size_t b = 1; b < n; ++b) {
      if (x[b - 1] > x[b]) return false;
    }
  }
  return true;
}

PermutahedronFactorization build_permutahedron_factorization(int n, int cap) {
  Permutahedron k(n);
  if (n > cap) {
    throw Error(ErrorKind::too_large,
                "permutahedron n=" + std::to_string(n) + " exceeds enumeration cap " + std::to_string(cap));
  }
  PermutahedronFactorization pf;
  pf.polytope = k;
  pf.network = batcher_network(n);
  pf.subsets = permutahedron_facet_subsets(n);
  pf.vertices = permutahedron_vertex_list(k, cap);
  pf.hrep = permutahedron_hrep(k, cap);

  const std::size_t m = pf.subsets.size();
  const std::size_t cols = pf.vertices.size();
  const std::size_t q = pf.network.size();
  const std::size_t r = 2 * q;
  const std::size_t dim = static_cast<std::size_t>(n);

  std::vector<int> sorted(dim);
  std::iota(sorted.begin(), sorted.end(), 1);

  Matrix<Rational> t(m, r);
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<int> a(dim, 0);
    for (int j : pf.subsets[i]) a[static_cast<std::size_t>(j)] = 1;
    const int weight = static_cast<int>(pf.subsets[i].size());
    for (std::size_t s = 0; s < q; ++s) {
      const Comparator c = pf.network.comparators[s];
      const int gap = std::abs(a[c.j] - a[c.k]);
      auto [next, kept] = comparator_conditional_reflect(std::move(a), c);
      t(i, kept ? 2 * s + 1 : 2 * s) = gap;
      a = std::move(next);
    }
    if (std::accumulate(a.begin(), a.end(), 0) != weight) {
      throw Error(ErrorKind::folding_divergence, "facet folding changed the subset size");
    }
    for (std::size_t j = 0; j < dim; ++j) {
      const int expected = j + static_cast<std::size_t>(weight) >= dim ? 1 : 0;
      if (a[j] != expected) {
        throw Error(ErrorKind::folding_divergence,
                    "facet " + std::to_string(i) + " does not fold onto the sorted-suffix facet");
      }
    }
  }

  Matrix<Rational> u(r, cols);
  for (std::size_t j = 0; j < cols; ++j) {
    std::vector<int> v = pf.vertices[j];
    for (std::size_t s = 0; s < q; ++s) {
      const Comparator c = pf.network.comparators[s];
      const int gap = std::abs(v[c.j] - v[c.k]);
      auto [next, kept] = comparator_conditional_reflect(std::move(v), c);
      u(kept ? 2 * s : 2 * s + 1, j) = gap;
      v = std::move(next);
    }
    if (v != sorted) {
      throw Error(ErrorKind::folding_divergence,
                  "vertex " + std::to_string(j) + " does not fold onto (1, ..., n)");
    }
  }

  std::vector<Point<Rational>> points;
  points.reserve(cols);
  for (const auto& perm : pf.vertices) {
    Point<Rational> p;
    for (int c : perm) p.emplace_back(c);
    points.push_back(std::move(p));
  }
  pf.slack = slack_matrix(pf.hrep, std::span<const Point<Rational>>(points));
  pf.factorization = NonnegFactorization<Rational>{std::move(t), std::move(u)};
  return pf;
}

ExactTelescopingReport permutahedron_telescoping_check(const std::vector<int>& indicator, long beta,
                                                       const std::vector<int>& vertex,
                                                       const ComparatorNetwork& network) {
  auto inner = [](const std::vector<int>& a, const std::vector<int>& v) {
    long acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += static_cast<long>(a[i]) * v[i];
    return acc;
  };
  ExactTelescopingReport report;
  std::vector<int> a = indicator;
  std::vector<int> v = vertex;
  report.initial_slack = beta - inner(a, v);
  bool ok = true;
  for (const auto& c : network.comparators) {
    ExactTelescopingStep step;
    step.lhs = beta - inner(a, v);
    const long gap_a = std::abs(a[c.j] - a[c.k]);
    const long gap_v = std::abs(v[c.j] - v[c.k]);
    auto [na, ka] = comparator_conditional_reflect(a, c);
    auto [nv, kv] = comparator_conditional_reflect(v, c);
    step.opposite_sides = ka != kv;
    if (step.opposite_sides) step.correction = gap_a * gap_v;
    step.rhs = beta - inner(na, nv) + step.correction;
    ok = ok && step.lhs == step.rhs;
    report.correction_sum += step.correction;
    report.steps.push_back(step);
    a = std::move(na);
    v = std::move(nv);
  }
  report.final_slack = beta - inner(a, v);
  report.pass = ok && report.final_slack == 0;
  return report;
}

}  // namespace polyfold
