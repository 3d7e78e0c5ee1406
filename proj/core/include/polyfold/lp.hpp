#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "polyfold/scalar.hpp"

namespace polyfold {

// lower <= coeffs . x <= upper; a missing side is unbounded.
template <class S>
struct LPRow {
  std::vector<S> coeffs;
  std::optional<S> lower;
  std::optional<S> upper;
};

enum class ObjectiveSense { maximize, feasibility };

// Dense LP over double or Rational. Variables default to [0, +inf).
template <class S>
struct LPProblem {
  std::size_t num_vars = 0;
  ObjectiveSense sense = ObjectiveSense::maximize;
  std::vector<S> objective;
  std::vector<LPRow<S>> rows;
  std::vector<std::optional<S>> lower;
  std::vector<std::optional<S>> upper;

  explicit LPProblem(std::size_t n = 0)
      : num_vars(n), objective(n, S(0)), lower(n, S(0)), upper(n) {}

  void add_less_equal(std::vector<S> coeffs, S rhs) {
    rows.push_back({std::move(coeffs), std::nullopt, std::move(rhs)});
  }
  void add_greater_equal(std::vector<S> coeffs, S rhs) {
    rows.push_back({std::move(coeffs), std::move(rhs), std::nullopt});
  }
  void add_equal(std::vector<S> coeffs, const S& rhs) { rows.push_back({std::move(coeffs), rhs, rhs}); }
  void add_range(std::vector<S> coeffs, S lo, S hi) {
    rows.push_back({std::move(coeffs), std::move(lo), std::move(hi)});
  }

  void set_free(std::size_t j) {
    lower[j].reset();
    upper[j].reset();
  }
  void set_bounds(std::size_t j, std::optional<S> lo, std::optional<S> hi) {
    lower[j] = std::move(lo);
    upper[j] = std::move(hi);
  }
};

enum class LPStatus { optimal, infeasible, unbounded };

template <class S>
struct LPResult {
  LPStatus status = LPStatus::infeasible;
  S value = S(0);
  std::vector<S> point;
  std::size_t iterations = 0;
};

struct SolveOptions {
  // Float mode only; exact pivoting under Bland's rule terminates.
  std::size_t max_iterations = 50'000;
  // Records every (basis, nonbasic bound) state and fails on a repeat.
  bool check_cycling = false;
};

// Two-phase bounded-variable primal simplex with Bland's rule. Exact in
// rational mode; float mode uses 1e-9 pivot and optimality tolerances and
// throws Error(numerical_failure) when the iteration cap is hit.
template <class S>
LPResult<S> solve(const LPProblem<S>& problem, const SolveOptions& options = {});

// Largest violation of any row or bound by point (0 when feasible).
template <class S>
S constraint_violation(const LPProblem<S>& problem, const std::vector<S>& point);

}  // namespace polyfold
