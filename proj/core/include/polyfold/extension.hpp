#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "polyfold/polytope.hpp"
#include "polyfold/slack.hpp"

namespace polyfold {

inline constexpr double kProjectionTolerance = 1e-7;

// Q = {(x, y) : A x + T y = b, y >= 0}.
template <class S>
struct ExtendedSystem {
  Matrix<S> A;
  Matrix<S> T;
  std::vector<S> b;

  std::size_t d() const noexcept { return A.cols(); }
  std::size_t r() const noexcept { return T.cols(); }
  std::size_t equations() const noexcept { return A.rows(); }
  // Only the r constraints y >= 0 are inequalities.
  std::size_t facet_upper_bound() const noexcept { return r(); }
};

// Re-verifies the factorization against slack_matrix(h, vertices) and throws
// Error(invalid_input) on shape mismatch or a failed check.
template <class S>
ExtendedSystem<S> build_extension(const LinearSystem<S>& h, const NonnegFactorization<S>& f,
                                  std::span<const Point<S>> vertices,
                                  double rel_tol = kFactorizationTolerance);

// (v_j, U^j); throws Error(lift_failure) if A v_j + T U^j misses b.
template <class S>
Point<S> lift_vertex(std::size_t j, const NonnegFactorization<S>& f, const LinearSystem<S>& h,
                     std::span<const Point<S>> vertices);

struct LiftReport {
  std::size_t lifted = 0;
  double max_residual = 0.0;
  bool pass = false;
};

template <class S>
LiftReport lift_all_vertices(const NonnegFactorization<S>& f, const LinearSystem<S>& h,
                             std::span<const Point<S>> vertices);

struct ProjectionReport {
  ScalarMode mode = ScalarMode::float64;
  std::vector<std::string> optima;  // max A_i x over Q, per facet row
  double max_excess = 0.0;          // max_i (optimum_i - b_i)
  double max_deficit = 0.0;         // max_i (b_i - optimum_i)
  double threshold = 0.0;
  bool contained = false;  // projection of Q lies in P
  bool tight = false;      // every optimum equals b_i
  bool pass = false;
};

// Maximizes each facet functional over Q with the LP kernel.
template <class S>
ProjectionReport check_projection_inclusion(const ExtendedSystem<S>& q, const LinearSystem<S>& h);

}  // namespace polyfold
