#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "polyfold/matrix.hpp"
#include "polyfold/polytope.hpp"
#include "polyfold/scalar.hpp"

namespace polyfold {

// Relative threshold below which negative float slacks are treated as
// roundoff and clamped to zero.
inline constexpr double kSlackClampTolerance = 1e-9;
inline constexpr double kFactorizationTolerance = 1e-9;

// Nonnegative matrix S with S_ij = b_i - A_i v_j.
template <class S>
class SlackMatrix {
 public:
  SlackMatrix() = default;
  // Validates nonnegativity (float entries above -1e-9*||S|| are clamped).
  explicit SlackMatrix(Matrix<S> entries);

  const Matrix<S>& entries() const noexcept { return entries_; }
  std::size_t rows() const noexcept { return entries_.rows(); }
  std::size_t cols() const noexcept { return entries_.cols(); }
  const S& operator()(std::size_t i, std::size_t j) const { return entries_(i, j); }

  S max_entry() const { return max_abs(entries_); }

  // Every row and every column holds a zero (float: below 1e-9*||S||).
  bool is_tight() const;

 private:
  Matrix<S> entries_;
};

// S = T U with T (m x r) and U (r x n) entrywise nonnegative.
template <class S>
struct NonnegFactorization {
  Matrix<S> T;
  Matrix<S> U;

  std::size_t rank() const noexcept { return T.cols(); }

  // Indices l whose column T^l or row U_l vanishes identically.
  std::vector<std::size_t> degenerate_components() const;
};

template <class S>
NonnegFactorization<S> make_factorization(Matrix<S> t, Matrix<S> u);

template <class S>
SlackMatrix<S> slack_matrix(const LinearSystem<S>& h, std::span<const Point<S>> points);

// T = S, U = identity: rank equals the number of columns.
template <class S>
NonnegFactorization<S> trivial_factorization(const SlackMatrix<S>& s);

// Drops components l with T^l = 0 or U_l = 0; the product is unchanged.
template <class S>
NonnegFactorization<S> prune_zero_components(const NonnegFactorization<S>& f);

struct VerificationReport {
  ScalarMode mode = ScalarMode::float64;
  double max_residual = 0.0;
  std::string max_residual_exact;  // rational mode only
  double slack_norm = 0.0;         // ||S||_inf
  double threshold = 0.0;          // absolute residual threshold applied
  bool nonnegative_t = true;
  bool nonnegative_u = true;
  std::size_t entries_checked = 0;
  bool sampled = false;
  bool pass = false;
};

// Rational mode demands S == T U exactly and ignores rel_tol.
template <class S>
VerificationReport verify_factorization(const SlackMatrix<S>& s, const NonnegFactorization<S>& f,
                                        double rel_tol = kFactorizationTolerance);

// Rescales column l of T and row l of U by reciprocal factors so that their
// infinity norms agree. In rational mode the geometric-mean factor is used
// only when it is rational; otherwise a rational factor keeping both norms
// within sqrt(||TU||) (checked by squaring) is chosen. When no such factor
// exists (||T^l|| ||U_l|| = ||TU|| with an irrational ratio) the component is
// split into two halves, so the rank can grow in rational mode.
// Throws Error(degenerate_factor) on a zero column of T or zero row of U.
template <class S>
NonnegFactorization<S> normalize_pair(const NonnegFactorization<S>& f);

// max(||T||, ||U||) <= sqrt(||TU||), compared squared in rational mode and
// with 1e-9 relative slack in float mode.
template <class S>
bool check_lemma1_bound(const NonnegFactorization<S>& f);

// Scale-invariant form of the same bound: the exactly normalized pair has
// ||T^l|| = ||U_l|| = sqrt(||T^l|| ||U_l||), so the bound for it is
// max_l ||T^l|| ||U_l|| <= ||TU||. Exact in rational mode even when the
// normalizing factors are irrational.
template <class S>
bool lemma1_certificate(const NonnegFactorization<S>& f);

}  // namespace polyfold
