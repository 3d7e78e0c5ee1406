#include "polyfold/slack.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "polyfold/error.hpp"

namespace polyfold {

namespace {

template <class S>
bool is_zero_entry(const S& x, double scale) {
  if constexpr (is_exact_v<S>) {
    (void)scale;
    return x == 0;
  } else {
    return std::fabs(x) <= kSlackClampTolerance * scale;
  }
}

// floor(sqrt(x) * 2^bits) / 2^bits and the ceiling on the same grid.
void sqrt_bracket(const Rational& x, Rational& lower, Rational& upper) {
  constexpr unsigned long bits = 64;
  Integer scaled_num = x.get_num() * x.get_den();
  mpz_mul_2exp(scaled_num.get_mpz_t(), scaled_num.get_mpz_t(), 2 * bits);
  Integer root = sqrt(scaled_num);  // floor
  Integer denom = x.get_den();
  mpz_mul_2exp(denom.get_mpz_t(), denom.get_mpz_t(), bits);
  lower = Rational(root, denom);
  upper = Rational(root * root == scaled_num ? root : Integer(root + 1), denom);
  lower.canonicalize();
  upper.canonicalize();
}

Rational sqrt_lower(const Rational& x) {
  Rational lo, hi;
  sqrt_bracket(x, lo, hi);
  return lo;
}

Rational sqrt_upper(const Rational& x) {
  Rational lo, hi;
  sqrt_bracket(x, lo, hi);
  return hi;
}

// Rational factor mu for column norm t, row norm u and product norm m with
// (t mu)^2 <= m and (u / (copies mu))^2 <= m, or nullopt. See normalize_pair.
std::optional<Rational> rational_normalizer(const Rational& t, const Rational& u, const Rational& m, int copies) {
  const Rational share = u / copies;
  Rational mu;
  if (exact_sqrt(Rational(share / t), mu)) return mu;
  if (t * share >= m) return std::nullopt;
  // mu^2 must lie in [share^2/m, m/t^2], an interval with nonempty interior.
  Rational lo = sqrt_upper(Rational(share * share / m));
  Rational hi = sqrt_lower(Rational(m / (t * t)));
  if (lo > hi) return std::nullopt;
  mu = simplest_between(lo, hi);  // 1 whenever 1 is admissible
  if ((t * mu) * (t * mu) <= m && (share / mu) * (share / mu) <= m) return mu;
  return std::nullopt;
}

}  // namespace

template <class S>
SlackMatrix<S>::SlackMatrix(Matrix<S> entries) : entries_(std::move(entries)) {
  if constexpr (is_exact_v<S>) {
    for (std::size_t i = 0; i < entries_.rows(); ++i) {
      for (std::size_t j = 0; j < entries_.cols(); ++j) {
        if (entries_(i, j) < 0) {
          throw Error(ErrorKind::not_contained, "negative slack " + format_scalar(entries_(i, j)) +
                                                    " at row " + std::to_string(i) + ", column " +
                                                    std::to_string(j));
        }
      }
    }
  } else {
    const double scale = max_abs(entries_);
    for (std::size_t i = 0; i < entries_.rows(); ++i) {
      for (std::size_t j = 0; j < entries_.cols(); ++j) {
        double& x = entries_(i, j);
        if (x >= 0) continue;
        if (x < -kSlackClampTolerance * scale) {
          throw Error(ErrorKind::not_contained, "negative slack " + format_scalar(x) + " at row " +
                                                    std::to_string(i) + ", column " + std::to_string(j));
        }
        x = 0.0;
      }
    }
  }
}

template <class S>
bool SlackMatrix<S>::is_tight() const {
  const double scale = to_double(max_entry());
  std::vector<bool> col_zero(cols(), false);
  for (std::size_t i = 0; i < rows(); ++i) {
    bool row_zero = false;
    for (std::size_t j = 0; j < cols(); ++j) {
      if (is_zero_entry(entries_(i, j), scale)) {
        row_zero = true;
        col_zero[j] = true;
      }
    }
    if (!row_zero) return false;
  }
  return std::all_of(col_zero.begin(), col_zero.end(), [](bool b) { return b; });
}

template <class S>
std::vector<std::size_t> NonnegFactorization<S>::degenerate_components() const {
  std::vector<std::size_t> out;
  for (std::size_t l = 0; l < rank(); ++l) {
    bool t_zero = true;
    for (std::size_t i = 0; i < T.rows() && t_zero; ++i) t_zero = T(i, l) == 0;
    bool u_zero = true;
    for (std::size_t j = 0; j < U.cols() && u_zero; ++j) u_zero = U(l, j) == 0;
    if (t_zero || u_zero) out.push_back(l);
  }
  return out;
}

template <class S>
NonnegFactorization<S> make_factorization(Matrix<S> t, Matrix<S> u) {
  if (t.cols() != u.rows()) {
    throw Error(ErrorKind::invalid_input, "factorization: T has " + std::to_string(t.cols()) +
                                              " columns but U has " + std::to_string(u.rows()) + " rows");
  }
  return NonnegFactorization<S>{std::move(t), std::move(u)};
}

template <class S>
SlackMatrix<S> slack_matrix(const LinearSystem<S>& h, std::span<const Point<S>> points) {
  check_linear_system(h);
  Matrix<S> s(h.rows(), points.size());
  for (std::size_t j = 0; j < points.size(); ++j) {
    if (points[j].size() != h.dim()) {
      throw Error(ErrorKind::invalid_input, "slack matrix: point " + std::to_string(j) + " has dimension " +
                                                std::to_string(points[j].size()) + ", expected " +
                                                std::to_string(h.dim()));
    }
  }
  for (std::size_t i = 0; i < h.rows(); ++i) {
    for (std::size_t j = 0; j < points.size(); ++j) {
      s(i, j) = h.b[i] - dot<S>(h.A.row(i), points[j]);
    }
  }
  return SlackMatrix<S>(std::move(s));
}

template <class S>
NonnegFactorization<S> trivial_factorization(const SlackMatrix<S>& s) {
  return NonnegFactorization<S>{s.entries(), Matrix<S>::identity(s.cols())};
}

template <class S>
NonnegFactorization<S> prune_zero_components(const NonnegFactorization<S>& f) {
  auto drop = f.degenerate_components();
  std::vector<std::size_t> keep;
  for (std::size_t l = 0, d = 0; l < f.rank(); ++l) {
    if (d < drop.size() && drop[d] == l) {
      ++d;
      continue;
    }
    keep.push_back(l);
  }
  Matrix<S> t(f.T.rows(), keep.size());
  Matrix<S> u(keep.size(), f.U.cols());
  for (std::size_t c = 0; c < keep.size(); ++c) {
    for (std::size_t i = 0; i < f.T.rows(); ++i) t(i, c) = f.T(i, keep[c]);
    for (std::size_t j = 0; j < f.U.cols(); ++j) u(c, j) = f.U(keep[c], j);
  }
  return NonnegFactorization<S>{std::move(t), std::move(u)};
}

template <class S>
VerificationReport verify_factorization(const SlackMatrix<S>& s, const NonnegFactorization<S>& f,
                                        double rel_tol) {
  if (f.T.rows() != s.rows() || f.U.cols() != s.cols() || f.T.cols() != f.U.rows()) {
    throw Error(ErrorKind::invalid_input, "verify: factor shapes " + std::to_string(f.T.rows()) + "x" +
                                              std::to_string(f.T.cols()) + " * " + std::to_string(f.U.rows()) +
                                              "x" + std::to_string(f.U.cols()) + " do not match slack " +
                                              std::to_string(s.rows()) + "x" + std::to_string(s.cols()));
  }
  VerificationReport report;
  report.mode = ScalarTraits<S>::mode;
  report.nonnegative_t = is_nonnegative(f.T);
  report.nonnegative_u = is_nonnegative(f.U);
  S norm = s.max_entry();
  report.slack_norm = to_double(norm);

  S worst(0);
  const std::size_t r = f.rank();
  std::vector<S> ucol(r);
  for (std::size_t j = 0; j < s.cols(); ++j) {
    for (std::size_t l = 0; l < r; ++l) ucol[l] = f.U(l, j);
    for (std::size_t i = 0; i < s.rows(); ++i) {
      S diff = s(i, j) - dot<S>(f.T.row(i), ucol);
      S a = abs_value(diff);
      if (a > worst) worst = a;
    }
  }
  report.entries_checked = s.rows() * s.cols();
  report.max_residual = to_double(worst);
  bool residual_ok;
  if constexpr (is_exact_v<S>) {
    report.max_residual_exact = format_scalar(worst);
    report.threshold = 0.0;
    residual_ok = worst == 0;
  } else {
    report.threshold = rel_tol * report.slack_norm;
    residual_ok = worst <= report.threshold;
  }
  report.pass = residual_ok && report.nonnegative_t && report.nonnegative_u;
  return report;
}

template <class S>
NonnegFactorization<S> normalize_pair(const NonnegFactorization<S>& f) {
  const std::size_t r = f.rank();
  std::vector<S> tnorm(r, S(0)), unorm(r, S(0));
  for (std::size_t i = 0; i < f.T.rows(); ++i) {
    for (std::size_t l = 0; l < r; ++l) tnorm[l] = std::max(tnorm[l], S(abs_value(f.T(i, l))));
  }
  for (std::size_t l = 0; l < r; ++l) {
    for (std::size_t j = 0; j < f.U.cols(); ++j) unorm[l] = std::max(unorm[l], S(abs_value(f.U(l, j))));
    if (tnorm[l] == 0 || unorm[l] == 0) {
      throw Error(ErrorKind::degenerate_factor, "component " + std::to_string(l) +
                                                    " has a zero column of T or zero row of U");
    }
  }

  if constexpr (is_exact_v<S>) {
    // A component whose exact factor is irrational and whose norms already
    // meet ||T^l|| ||U_l|| = ||TU|| is split into two equal halves.
    const Rational m = product_max_abs(f.T, f.U);
    std::vector<std::pair<Rational, int>> plan;
    plan.reserve(r);
    std::size_t width = 0;
    for (std::size_t l = 0; l < r; ++l) {
      int copies = 1;
      auto mu = rational_normalizer(tnorm[l], unorm[l], m, 1);
      if (!mu) {
        copies = 2;
        mu = rational_normalizer(tnorm[l], unorm[l], m, 2);
      }
      if (!mu) throw Error(ErrorKind::numerical_failure, "no rational normalizer for component " + std::to_string(l));
      plan.emplace_back(*mu, copies);
      width += copies;
    }
    Matrix<Rational> t(f.T.rows(), width), u(width, f.U.cols());
    std::size_t c = 0;
    for (std::size_t l = 0; l < r; ++l) {
      const auto& [mu, copies] = plan[l];
      for (int k = 0; k < copies; ++k, ++c) {
        for (std::size_t i = 0; i < t.rows(); ++i) t(i, c) = f.T(i, l) * mu;
        for (std::size_t j = 0; j < u.cols(); ++j) u(c, j) = f.U(l, j) / (mu * copies);
      }
    }
    return make_factorization(std::move(t), std::move(u));
  } else {
    NonnegFactorization<S> out = f;
    for (std::size_t l = 0; l < r; ++l) {
      S mu = std::sqrt(unorm[l] / tnorm[l]);
      if (mu == 1) continue;
      for (std::size_t i = 0; i < out.T.rows(); ++i) out.T(i, l) *= mu;
      for (std::size_t j = 0; j < out.U.cols(); ++j) out.U(l, j) /= mu;
    }
    return out;
  }
}

template <class S>
bool check_lemma1_bound(const NonnegFactorization<S>& f) {
  S bound = product_max_abs(f.T, f.U);
  S biggest = std::max(max_abs(f.T), max_abs(f.U));
  if constexpr (is_exact_v<S>) {
    return biggest * biggest <= bound;
  } else {
    return biggest <= std::sqrt(bound) * (1.0 + 1e-9);
  }
}

template <class S>
bool lemma1_certificate(const NonnegFactorization<S>& f) {
  S bound = product_max_abs(f.T, f.U);
  const std::size_t r = f.rank();
  std::vector<S> tnorm(r, S(0)), unorm(r, S(0));
  for (std::size_t i = 0; i < f.T.rows(); ++i) {
    for (std::size_t l = 0; l < r; ++l) tnorm[l] = std::max(tnorm[l], S(abs_value(f.T(i, l))));
  }
  for (std::size_t l = 0; l < r; ++l) {
    for (std::size_t j = 0; j < f.U.cols(); ++j) unorm[l] = std::max(unorm[l], S(abs_value(f.U(l, j))));
    S prod = tnorm[l] * unorm[l];
    if constexpr (is_exact_v<S>) {
      if (prod > bound) return false;
    } else {
      if (prod > bound * (1.0 + 1e-9)) return false;
    }
  }
  return true;
}

#define POLYFOLD_INSTANTIATE(S)                                                                        \
  template class SlackMatrix<S>;                                                                       \
  template struct NonnegFactorization<S>;                                                              \
  template NonnegFactorization<S> make_factorization(Matrix<S>, Matrix<S>);                            \
  template SlackMatrix<S> slack_matrix(const LinearSystem<S>&, std::span<const Point<S>>);             \
  template NonnegFactorization<S> trivial_factorization(const SlackMatrix<S>&);                        \
  template NonnegFactorization<S> prune_zero_components(const NonnegFactorization<S>&);                \
  template VerificationReport verify_factorization(const SlackMatrix<S>&, const NonnegFactorization<S>&, \
                                                   double);                                            \
  template NonnegFactorization<S> normalize_pair(const NonnegFactorization<S>&);                       \
  template bool check_lemma1_bound(const NonnegFactorization<S>&);                                     \
  template bool lemma1_certificate(const NonnegFactorization<S>&);

POLYFOLD_INSTANTIATE(double)
POLYFOLD_INSTANTIATE(Rational)

#undef POLYFOLD_INSTANTIATE

}  // namespace polyfold
