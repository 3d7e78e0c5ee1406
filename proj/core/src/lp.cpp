#include "polyfold/lp.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "polyfold/error.hpp"
#include "polyfold/matrix.hpp"

namespace polyfold {

namespace {

template <class S>
struct Tolerance {
  static bool positive(const S& x) { return x > 0; }
  static bool negative(const S& x) { return x < 0; }
  static bool nonzero(const S& x) { return x != 0; }
};

template <>
struct Tolerance<double> {
  static constexpr double eps = 1e-9;
  static bool positive(double x) { return x > eps; }
  static bool negative(double x) { return x < -eps; }
  static bool nonzero(double x) { return std::fabs(x) > eps; }
};

// Column layout: [x (n) | row activities s (m) | artificials (m)], with the
// equations A x - s + diag(sigma) art = 0.
template <class S>
class BoundedSimplex {
 public:
  BoundedSimplex(const LPProblem<S>& p, const SolveOptions& options) : p_(p), options_(options) {
    n_ = p.num_vars;
    m_ = p.rows.size();
    cols_ = n_ + 2 * m_;
    original_ = Matrix<S>(m_, cols_);
    lower_.assign(cols_, std::nullopt);
    upper_.assign(cols_, std::nullopt);
    value_.assign(cols_, S(0));
    basic_row_.assign(cols_, -1);
    basis_.assign(m_, 0);

    for (std::size_t j = 0; j < n_; ++j) {
      lower_[j] = p.lower[j];
      upper_[j] = p.upper[j];
      value_[j] = start_value(j);
    }
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) original_(i, j) = p.rows[i].coeffs[j];
      original_(i, n_ + i) = S(-1);
      lower_[n_ + i] = p.rows[i].lower;
      upper_[n_ + i] = p.rows[i].upper;
    }

    // Rows whose activity already fits their bounds start with s basic;
    // the others start with an artificial absorbing the violation.
    for (std::size_t i = 0; i < m_; ++i) {
      S activity(0);
      for (std::size_t j = 0; j < n_; ++j) activity += original_(i, j) * value_[j];
      const std::size_t s = n_ + i;
      const std::size_t art = n_ + m_ + i;
      lower_[art] = S(0);
      bool below = lower_[s] && activity < *lower_[s];
      bool above = upper_[s] && activity > *upper_[s];
      if (!below && !above) {
        original_(i, art) = S(1);
        upper_[art] = S(0);
        value_[s] = activity;
        set_basic(i, s);
      } else {
        value_[s] = below ? *lower_[s] : *upper_[s];
        S gap = value_[s] - activity;  // sigma * art = s - A x
        original_(i, art) = sign_of(gap) > 0 ? S(1) : S(-1);
        value_[art] = abs_value(gap);
        set_basic(i, art);
        has_artificial_ = true;
      }
    }

    tableau_ = Matrix<S>(m_, cols_);
    for (std::size_t i = 0; i < m_; ++i) {
      const S pivot = original_(i, basis_[i]);
      for (std::size_t j = 0; j < cols_; ++j) tableau_(i, j) = original_(i, j) / pivot;
    }
  }

  LPResult<S> run() {
    LPResult<S> result;
    if (has_artificial_) {
      std::vector<S> cost(cols_, S(0));
      for (std::size_t i = 0; i < m_; ++i) cost[n_ + m_ + i] = S(-1);
      optimize(cost);
      refresh_basic_values();
      S infeasibility(0);
      for (std::size_t i = 0; i < m_; ++i) infeasibility += value_[n_ + m_ + i];
      if (Tolerance<S>::positive(infeasibility)) {
        result.status = LPStatus::infeasible;
        result.iterations = iterations_;
        return result;
      }
    }
    for (std::size_t i = 0; i < m_; ++i) {
      const std::size_t art = n_ + m_ + i;
      upper_[art] = S(0);
      if (basic_row_[art] < 0) value_[art] = S(0);
    }

    result.status = LPStatus::optimal;
    if (p_.sense == ObjectiveSense::maximize) {
      std::vector<S> cost(cols_, S(0));
      for (std::size_t j = 0; j < n_; ++j) cost[j] = p_.objective[j];
      if (!optimize(cost)) result.status = LPStatus::unbounded;
      refresh_basic_values();
    }
    result.iterations = iterations_;
    result.point.assign(value_.begin(), value_.begin() + static_cast<std::ptrdiff_t>(n_));
    if (p_.sense == ObjectiveSense::maximize) {
      for (std::size_t j = 0; j < n_; ++j) result.value += p_.objective[j] * result.point[j];
    }
    return result;
  }

 private:
  S start_value(std::size_t j) const {
    if (lower_[j]) return *lower_[j];
    if (upper_[j]) return *upper_[j];
    return S(0);
  }

  void set_basic(std::size_t row, std::size_t col) {
    basis_[row] = col;
    basic_row_[col] = static_cast<long>(row);
  }

  bool is_fixed(std::size_t j) const { return lower_[j] && upper_[j] && *lower_[j] == *upper_[j]; }

  // Returns false when the objective is unbounded.
  bool optimize(const std::vector<S>& cost) {
    std::set<std::vector<std::size_t>> seen;
    while (true) {
      if constexpr (!is_exact_v<S>) {
        if (iterations_ >= options_.max_iterations) {
          throw Error(ErrorKind::numerical_failure,
                      "simplex iteration cap " + std::to_string(options_.max_iterations) + " exceeded");
        }
      }
      if (options_.check_cycling) {
        std::vector<std::size_t> state(basis_.begin(), basis_.end());
        std::sort(state.begin(), state.end());
        for (std::size_t j = 0; j < cols_; ++j) {
          if (basic_row_[j] < 0 && upper_[j] && value_[j] == *upper_[j]) state.push_back(cols_ + j);
        }
        if (!seen.insert(state).second) {
          throw Error(ErrorKind::numerical_failure, "simplex revisited a basis");
        }
      }

      // Bland: the lowest-index improving column enters.
      std::size_t enter = cols_;
      int direction = 0;
      for (std::size_t j = 0; j < cols_ && enter == cols_; ++j) {
        if (basic_row_[j] >= 0 || is_fixed(j)) continue;
        S reduced = cost[j];
        for (std::size_t i = 0; i < m_; ++i) {
          if (tableau_(i, j) != 0) reduced -= cost[basis_[i]] * tableau_(i, j);
        }
        if (Tolerance<S>::positive(reduced) && (!upper_[j] || value_[j] < *upper_[j])) {
          enter = j;
          direction = 1;
        } else if (Tolerance<S>::negative(reduced) && (!lower_[j] || value_[j] > *lower_[j])) {
          enter = j;
          direction = -1;
        }
      }
      if (enter == cols_) return true;
      ++iterations_;

      // Ratio test; ties go to the lowest-index basic variable, and a bound
      // flip of the entering column wins over an equal pivot.
      std::optional<S> best;
      long leave_row = -1;
      bool leave_to_upper = false;
      for (std::size_t i = 0; i < m_; ++i) {
        const S& coef = tableau_(i, enter);
        if (!Tolerance<S>::nonzero(coef)) continue;
        // d(x_B)/dt = -direction * coef
        S rate = direction > 0 ? S(-coef) : S(coef);
        const std::size_t b = basis_[i];
        std::optional<S> limit;
        bool to_upper = false;
        if (rate < 0 && lower_[b]) {
          limit = S((value_[b] - *lower_[b]) / (-rate));
        } else if (rate > 0 && upper_[b]) {
          limit = S((*upper_[b] - value_[b]) / rate);
          to_upper = true;
        }
        if (!limit) continue;
        if constexpr (!is_exact_v<S>) {
          if (*limit < 0) *limit = 0;
        }
        if (!best || *limit < *best ||
            (*limit == *best && b < basis_[static_cast<std::size_t>(leave_row)])) {
          best = limit;
          leave_row = static_cast<long>(i);
          leave_to_upper = to_upper;
        }
      }
      std::optional<S> step = best;
      if (lower_[enter] && upper_[enter]) {
        S flip = *upper_[enter] - *lower_[enter];
        if (!best || flip <= *best) {
          step = flip;
          leave_row = -1;
        }
      }
      if (!step) return false;

      const S delta = direction > 0 ? *step : S(-*step);
      value_[enter] += delta;
      for (std::size_t i = 0; i < m_; ++i) {
        if (tableau_(i, enter) != 0) value_[basis_[i]] -= delta * tableau_(i, enter);
      }
      if (leave_row < 0) {
        value_[enter] = direction > 0 ? *upper_[enter] : *lower_[enter];
        continue;
      }
      const std::size_t r = static_cast<std::size_t>(leave_row);
      const std::size_t leaving = basis_[r];
      value_[leaving] = leave_to_upper ? *upper_[leaving] : *lower_[leaving];
      basic_row_[leaving] = -1;
      pivot(r, enter);
      set_basic(r, enter);
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    const S inv = S(1) / tableau_(r, c);
    for (std::size_t j = 0; j < cols_; ++j) {
      if (tableau_(r, j) != 0) tableau_(r, j) *= inv;
    }
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      const S factor = tableau_(i, c);
      if (factor == 0) continue;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (tableau_(r, j) != 0) tableau_(i, j) -= factor * tableau_(r, j);
      }
      if constexpr (!is_exact_v<S>) tableau_(i, c) = 0.0;
    }
  }

  // Recomputes basic values from the nonbasic ones. B^{-1} sits in the
  // activity columns of the tableau, whose original columns are -e_i.
  void refresh_basic_values() {
    if constexpr (is_exact_v<S>) return;
    std::vector<S> rhs(m_, S(0));
    for (std::size_t j = 0; j < cols_; ++j) {
      if (basic_row_[j] >= 0 || value_[j] == 0) continue;
      for (std::size_t k = 0; k < m_; ++k) rhs[k] -= original_(k, j) * value_[j];
    }
    for (std::size_t i = 0; i < m_; ++i) {
      S acc(0);
      for (std::size_t k = 0; k < m_; ++k) acc -= tableau_(i, n_ + k) * rhs[k];
      value_[basis_[i]] = acc;
    }
  }

  const LPProblem<S>& p_;
  SolveOptions options_;
  std::size_t n_ = 0, m_ = 0, cols_ = 0;
  Matrix<S> original_;
  Matrix<S> tableau_;
  std::vector<std::optional<S>> lower_, upper_;
  std::vector<S> value_;
  std::vector<long> basic_row_;
  std::vector<std::size_t> basis_;
  bool has_artificial_ = false;
  std::size_t iterations_ = 0;
};

template <class S>
void validate(const LPProblem<S>& p) {
  if (p.lower.size() != p.num_vars || p.upper.size() != p.num_vars) {
    throw Error(ErrorKind::invalid_input, "LP: bound vectors do not match the variable count");
  }
  if (p.sense == ObjectiveSense::maximize && p.objective.size() != p.num_vars) {
    throw Error(ErrorKind::invalid_input, "LP: objective length does not match the variable count");
  }
  for (std::size_t i = 0; i < p.rows.size(); ++i) {
    if (p.rows[i].coeffs.size() != p.num_vars) {
      throw Error(ErrorKind::invalid_input, "LP: row " + std::to_string(i) + " has wrong length");
    }
  }
}

}  // namespace

template <class S>
LPResult<S> solve(const LPProblem<S>& problem, const SolveOptions& options) {
  validate(problem);
  for (std::size_t j = 0; j < problem.num_vars; ++j) {
    if (problem.lower[j] && problem.upper[j] && *problem.lower[j] > *problem.upper[j]) {
      LPResult<S> empty;
      empty.status = LPStatus::infeasible;
      return empty;
    }
  }
  for (const auto& row : problem.rows) {
    if (row.lower && row.upper && *row.lower > *row.upper) {
      LPResult<S> empty;
      empty.status = LPStatus::infeasible;
      return empty;
    }
  }
  BoundedSimplex<S> simplex(problem, options);
  return simplex.run();
}

template <class S>
S constraint_violation(const LPProblem<S>& problem, const std::vector<S>& point) {
  S worst(0);
  auto track = [&worst](const S& v) {
    if (v > worst) worst = v;
  };
  for (std::size_t j = 0; j < problem.num_vars; ++j) {
    if (problem.lower[j]) track(S(*problem.lower[j] - point[j]));
    if (problem.upper[j]) track(S(point[j] - *problem.upper[j]));
  }
  for (const auto& row : problem.rows) {
    S activity(0);
    for (std::size_t j = 0; j < problem.num_vars; ++j) activity += row.coeffs[j] * point[j];
    if (row.lower) track(S(*row.lower - activity));
    if (row.upper) track(S(activity - *row.upper));
  }
  return worst;
}

template LPResult<double> solve(const LPProblem<double>&, const SolveOptions&);
template LPResult<Rational> solve(const LPProblem<Rational>&, const SolveOptions&);
template double constraint_violation(const LPProblem<double>&, const std::vector<double>&);
template Rational constraint_violation(const LPProblem<Rational>&, const std::vector<Rational>&);

}  // namespace polyfold
