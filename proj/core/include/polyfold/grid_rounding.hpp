#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "polyfold/polytope.hpp"
#include "polyfold/slack.hpp"

namespace polyfold {

inline constexpr std::size_t kExhaustiveSelectionCap = 100'000;
inline constexpr std::size_t kRecoveryPointCap = 1'000'000;

// ((d + 1) N)^d.
Integer compute_delta(int d, const Integer& grid_bound);

struct CoefficientBoundReport {
  Rational max_coefficient;  // max(||A||, ||b||)
  Rational max_slack;
  bool coefficients_ok = false;  // <= delta
  bool slack_ok = false;         // <= delta^2
  bool pass = false;
};

// Checks ||A||, ||b|| <= delta and, when a slack matrix is given,
// ||S|| <= delta^2.
CoefficientBoundReport check_coefficient_bounds(const LinearSystem<Rational>& h, const Integer& delta,
                                                const SlackMatrix<Rational>* slack = nullptr);

struct RowSelection {
  std::vector<std::size_t> rows;  // ascending
  Rational volume_squared;        // Gram determinant of the chosen rows
  bool exhaustive = false;
};

// Chooses k rows of m spanning a parallelepiped of maximum volume: globally
// when C(rows, k) <= exhaustive_cap, otherwise greedily followed by single-row
// swaps until no swap increases the volume. Throws Error(degenerate_input)
// when no k rows are independent.
RowSelection select_max_volume_rows(const Matrix<Rational>& m, std::size_t k,
                                    std::size_t exhaustive_cap = kExhaustiveSelectionCap);

// Coefficients expressing each unselected row in terms of the selected ones;
// true when every coefficient has absolute value <= 1.
bool check_cramer_bound(const Matrix<Rational>& m, std::span<const std::size_t> selected);

// Integer system whose box-feasibility test recovers the lattice points of P.
struct RoundedSystem {
  Matrix<Rational> A_bar;  // (d + r) x d, integral
  Matrix<Rational> T_bar;  // (d + r) x r, multiples of step
  std::vector<Rational> b_bar;
  Integer delta;
  std::size_t d = 0;
  std::size_t r = 0;
  Rational epsilon;  // 1 / (4 (d + r))
  Rational step;     // 1 / (4 r (d + r) delta)
  std::vector<std::size_t> source_rows;  // selected rows; the rest is padding
};

// Takes rows I of (A, T, b), rounds T to the nearest multiple of step (ties
// toward zero) and pads with zero rows to d + r. Throws Error(invalid_input)
// when A or b is not integral, ||T|| > delta or |I| > d + r.
RoundedSystem round_system(const Matrix<Rational>& a, const Matrix<Rational>& t, std::span<const Rational> b,
                           std::span<const std::size_t> selected, const Integer& delta, std::size_t r,
                           std::size_t d);

// Invariants: shapes, integrality, grid multiples, entry bounds <= delta.
bool check_rounded_invariants(const RoundedSystem& system);

// Exists y in [0, delta]^r with |A_bar x + T_bar y - b_bar| <= epsilon
// componentwise; decided by the exact LP kernel.
bool membership_test(const RoundedSystem& system, std::span<const Rational> x);

struct RecoveryReport {
  std::size_t points_checked = 0;
  std::size_t members = 0;
  std::vector<std::array<long, 2>> disagreements;  // sorted by point
  bool pass = false;
};

// Compares membership_test with exact polygon membership on every lattice
// point of the bounding box. Throws Error(too_large) above `cap` points.
RecoveryReport verify_recovery(const RoundedSystem& system, const Polygon<Rational>& polygon,
                               std::size_t cap = kRecoveryPointCap);

// End-to-end rounding of an integral polygon with a verified factorization.
struct RoundingPipeline {
  LinearSystem<Rational> hrep;
  SlackMatrix<Rational> slack;
  NonnegFactorization<Rational> normalized;
  Integer grid_bound;
  Integer delta;
  CoefficientBoundReport coefficient_bounds;
  bool factor_bounds_ok = false;  // ||T||, ||U|| <= delta after normalization
  bool lemma1_ok = false;         // check_lemma1_bound on the normalized pair
  std::size_t span_dimension = 0;
  RowSelection selection;
  bool cramer_ok = false;
  RoundedSystem system;
};

// grid_bound defaults to max(2, max |coordinate|).
RoundingPipeline run_rounding_pipeline(const Polygon<Rational>& polygon,
                                       const NonnegFactorization<Rational>& factorization,
                                       std::optional<Integer> grid_bound = std::nullopt);

}  // namespace polyfold
