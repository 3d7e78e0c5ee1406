#include "polyfold/extension.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "polyfold/error.hpp"
#include "polyfold/lp.hpp"

namespace polyfold {

template <class S>
ExtendedSystem<S> build_extension(const LinearSystem<S>& h, const NonnegFactorization<S>& f,
                                  std::span<const Point<S>> vertices, double rel_tol) {
  check_linear_system(h);
  if (f.T.rows() != h.rows() || f.U.cols() != vertices.size()) {
    throw Error(ErrorKind::invalid_input, "extension: factorization is " + std::to_string(f.T.rows()) + "x" +
                                              std::to_string(f.U.cols()) + " but the polytope has " +
                                              std::to_string(h.rows()) + " facets and " +
                                              std::to_string(vertices.size()) + " vertices");
  }
  auto report = verify_factorization(slack_matrix(h, vertices), f, rel_tol);
  if (!report.pass) {
    throw Error(ErrorKind::invalid_input,
                "extension: factorization does not reproduce the slack matrix (residual " +
                    format_scalar(report.max_residual) + ")");
  }
  return ExtendedSystem<S>{h.A, f.T, h.b};
}

template <class S>
Point<S> lift_vertex(std::size_t j, const NonnegFactorization<S>& f, const LinearSystem<S>& h,
                     std::span<const Point<S>> vertices) {
  if (j >= vertices.size() || j >= f.U.cols()) {
    throw Error(ErrorKind::invalid_input, "lift: vertex index " + std::to_string(j) + " out of range");
  }
  const Point<S>& v = vertices[j];
  Point<S> lifted(v.begin(), v.end());
  for (std::size_t l = 0; l < f.rank(); ++l) {
    if (f.U(l, j) < 0) throw Error(ErrorKind::lift_failure, "lift: negative entry in U");
    lifted.push_back(f.U(l, j));
  }
  S bnorm(max_abs(std::span<const S>(h.b)));
  S worst(0);
  for (std::size_t i = 0; i < h.rows(); ++i) {
    S lhs = dot<S>(h.A.row(i), v);
    for (std::size_t l = 0; l < f.rank(); ++l) lhs += f.T(i, l) * f.U(l, j);
    S err = abs_value(S(lhs - h.b[i]));
    if (err > worst) worst = err;
  }
  bool ok;
  if constexpr (is_exact_v<S>) {
    ok = worst == 0;
  } else {
    ok = worst <= kFactorizationTolerance * std::max(bnorm, 1e-300);
  }
  if (!ok) {
    throw Error(ErrorKind::lift_failure, "lift: vertex " + std::to_string(j) + " misses A x + T y = b by " +
                                             format_scalar(worst));
  }
  return lifted;
}

template <class S>
LiftReport lift_all_vertices(const NonnegFactorization<S>& f, const LinearSystem<S>& h,
                             std::span<const Point<S>> vertices) {
  LiftReport report;
  report.pass = true;
  for (std::size_t j = 0; j < vertices.size(); ++j) {
    Point<S> lifted;
    try {
      lifted = lift_vertex(j, f, h, vertices);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::lift_failure) throw;
      report.pass = false;
      continue;
    }
    ++report.lifted;
    for (std::size_t i = 0; i < h.rows(); ++i) {
      S lhs(0);
      for (std::size_t c = 0; c < lifted.size(); ++c) {
        lhs += (c < h.dim() ? h.A(i, c) : f.T(i, c - h.dim())) * lifted[c];
      }
      report.max_residual = std::max(report.max_residual, std::fabs(to_double(S(lhs - h.b[i]))));
    }
  }
  return report;
}

template <class S>
ProjectionReport check_projection_inclusion(const ExtendedSystem<S>& q, const LinearSystem<S>& h) {
  if (q.A.rows() != h.rows() || q.d() != h.dim() || q.T.rows() != h.rows()) {
    throw Error(ErrorKind::invalid_input, "projection: extension and polytope shapes differ");
  }
  const std::size_t d = q.d();
  const std::size_t r = q.r();
  LPProblem<S> lp(d + r);
  for (std::size_t j = 0; j < d; ++j) lp.set_free(j);
  for (std::size_t i = 0; i < q.equations(); ++i) {
    std::vector<S> coeffs(d + r);
    for (std::size_t j = 0; j < d; ++j) coeffs[j] = q.A(i, j);
    for (std::size_t l = 0; l < r; ++l) coeffs[d + l] = q.T(i, l);
    lp.add_equal(std::move(coeffs), q.b[i]);
  }

  ProjectionReport report;
  report.mode = ScalarTraits<S>::mode;
  const double bnorm = to_double(max_abs(std::span<const S>(h.b)));
  report.threshold = is_exact_v<S> ? 0.0 : kProjectionTolerance * bnorm;
  bool contained = true;
  bool tight = true;
  for (std::size_t i = 0; i < h.rows(); ++i) {
    for (std::size_t j = 0; j < d; ++j) lp.objective[j] = h.A(i, j);
    for (std::size_t l = 0; l < r; ++l) lp.objective[d + l] = S(0);
    LPResult<S> res = solve(lp);
    if (res.status == LPStatus::infeasible) {
      throw Error(ErrorKind::invalid_input, "projection: extension is empty");
    }
    if (res.status == LPStatus::unbounded) {
      report.optima.push_back("unbounded");
      report.max_excess = INFINITY;
      contained = false;
      continue;
    }
    report.optima.push_back(format_scalar(res.value));
    S excess = res.value - h.b[i];
    report.max_excess = std::max(report.max_excess, to_double(excess));
    report.max_deficit = std::max(report.max_deficit, to_double(S(-excess)));
    if constexpr (is_exact_v<S>) {
      contained = contained && excess <= 0;
      tight = tight && excess == 0;
    } else {
      contained = contained && excess <= report.threshold;
      tight = tight && std::fabs(excess) <= report.threshold;
    }
  }
  report.contained = contained;
  report.tight = contained && tight;
  report.pass = report.contained;
  return report;
}

#define POLYFOLD_INSTANTIATE(S)                                                                           \
  template ExtendedSystem<S> build_extension(const LinearSystem<S>&, const NonnegFactorization<S>&,      \
                                             std::span<const Point<S>>, double);                          \
  template Point<S> lift_vertex(std::size_t, const NonnegFactorization<S>&, const LinearSystem<S>&,       \
                                std::span<const Point<S>>);                                               \
  template LiftReport lift_all_vertices(const NonnegFactorization<S>&, const LinearSystem<S>&,           \
                                        std::span<const Point<S>>);                                       \
  template ProjectionReport check_projection_inclusion(const ExtendedSystem<S>&, const LinearSystem<S>&);

POLYFOLD_INSTANTIATE(double)
POLYFOLD_INSTANTIATE(Rational)

#undef POLYFOLD_INSTANTIATE

}  // namespace polyfold
