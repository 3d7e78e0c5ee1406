#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "polyfold/polytope.hpp"
#include "polyfold/slack.hpp"

namespace polyfold {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

// Points within this distance of an axis count as lying on it.
inline constexpr double kOnAxisTolerance = 1e-12;
inline constexpr double kTerminalTolerance = 1e-9;
inline constexpr std::size_t kFullVerificationCap = 4096;
inline constexpr std::size_t kSampledEntries = 1'000'000;

// Symmetry axis through the origin. normal is a unit vector whose closed
// positive halfplane contains v_1.
struct FoldAxis {
  Vec2 normal;
  std::size_t index = 0;
  std::size_t k = 0;            // loop counter when the axis was defined
  bool through_vertex = false;  // k odd
};

// Trajectory of a vertex or a facet normal under the conditional reflections.
// side_flags[i] is true when point i was already in the positive halfplane.
struct FoldingSequence {
  std::vector<Vec2> points;
  std::vector<bool> side_flags;

  const Vec2& terminal() const { return points.back(); }
};

// Axes for the regular n-gon as placed by make_regular_ngon, from k = n while
// k > 1 with k <- ceil(k/2). Yields ceil(log2 n) axes.
std::vector<FoldAxis> folding_axes(std::size_t n);

// Number of axes folding_axes(n) produces.
std::size_t folding_depth(std::size_t n);

// Reflects x across the axis unless it lies in the closed positive halfplane.
std::pair<Vec2, bool> conditional_reflect(Vec2 x, const FoldAxis& axis);

// Folds v and checks that it ends at terminal (v_1 for the regular n-gon).
// Throws Error(folding_divergence) otherwise.
FoldingSequence vertex_folding_sequence(Vec2 v, std::span<const FoldAxis> axes,
                                        Vec2 terminal = {1.0, 0.0});

// Folds the facet normal a. beta is carried unchanged; the terminal normal
// must match one of the two candidates within 1e-9.
FoldingSequence facet_folding_sequence(Vec2 a, double beta, std::span<const FoldAxis> axes,
                                       std::pair<Vec2, Vec2> terminal_normals);

struct TelescopingStep {
  double lhs = 0.0;         // beta - a_i . v_i
  double rhs = 0.0;         // beta - a_{i+1} . v_{i+1} + correction
  double correction = 0.0;  // 2 d(a_i, l_i) d(v_i, l_i) or 0
  bool opposite_sides = false;
  double error = 0.0;       // |lhs - rhs|
};

struct TelescopingReport {
  std::vector<TelescopingStep> steps;
  double initial_slack = 0.0;
  double final_slack = 0.0;
  double correction_sum = 0.0;
  bool pass = false;  // every step within 1e-10 and final slack within 1e-9
};

TelescopingReport telescoping_slack_check(Vec2 facet_normal, double beta, Vec2 vertex,
                                          std::span<const FoldAxis> axes);

// Regular n-gon together with its folding data and rank-2q factorization.
struct PolygonFactorization {
  std::size_t n = 0;
  std::size_t q = 0;
  Polygon<double> polygon;
  LinearSystem<double> hrep;
  std::vector<FoldAxis> axes;
  NonnegFactorization<double> factorization;
  // Materialized only for n <= the slack cap passed to the builder.
  std::optional<SlackMatrix<double>> slack;

  std::size_t rank() const { return factorization.rank(); }

  // b_i - A_i v_j computed on demand.
  double slack_entry(std::size_t facet, std::size_t vertex) const;
};

PolygonFactorization build_polygon_factorization(std::size_t n,
                                                 std::size_t slack_cap = kFullVerificationCap);

// Entrywise check of S = TU: every entry for n <= full_cap, otherwise
// `samples` uniformly random entries drawn from a seeded engine.
VerificationReport verify_polygon_factorization(const PolygonFactorization& pf,
                                                double rel_tol = kFactorizationTolerance,
                                                std::size_t full_cap = kFullVerificationCap,
                                                std::size_t samples = kSampledEntries,
                                                std::uint64_t seed = 0x5eed);

}  // namespace polyfold
