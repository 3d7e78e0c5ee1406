#include "polyfold/polygon_folding.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "polyfold/detail/random.hpp"
#include "polyfold/error.hpp"

namespace polyfold {

namespace {

Vec2 to_vec(const Point2<double>& p) { return {p.x, p.y}; }

Vec2 reflect(Vec2 x, Vec2 normal) {
  double s = 2.0 * dot(normal, x);
  return {x.x - s * normal.x, x.y - s * normal.y};
}

bool near(Vec2 a, Vec2 b, double tol) {
  return std::fabs(a.x - b.x) <= tol && std::fabs(a.y - b.y) <= tol;
}

std::string describe(Vec2 v) {
  return "(" + format_scalar(v.x) + ", " + format_scalar(v.y) + ")";
}

}  // namespace

std::size_t folding_depth(std::size_t n) {
  std::size_t q = 0;
  for (std::size_t k = n; k > 1; k = (k + 1) / 2) ++q;
  return q;
}

std::vector<FoldAxis> folding_axes(std::size_t n) {
  if (n < 3) throw Error(ErrorKind::invalid_size, "folding axes need n >= 3, got " + std::to_string(n));
  const int ni = static_cast<int>(n);
  const Vec2 v1 = to_vec(regular_ngon_vertex(ni, 0));
  std::vector<FoldAxis> axes;
  std::size_t k = n;
  for (std::size_t i = 0; k > 1; ++i) {
    // Midpoint of v_{ceil(k/2)} and v_{ceil((k+1)/2)} in 1-based numbering.
    const int a = static_cast<int>((k + 1) / 2) - 1;
    const int b = static_cast<int>((k + 2) / 2) - 1;
    Vec2 pa = to_vec(regular_ngon_vertex(ni, a));
    Vec2 pb = to_vec(regular_ngon_vertex(ni, b));
    Vec2 mid{0.5 * (pa.x + pb.x), 0.5 * (pa.y + pb.y)};
    double len = std::hypot(mid.x, mid.y);
    Vec2 dir{mid.x / len, mid.y / len};
    Vec2 normal{dir.y, -dir.x};
    double side = dot(normal, v1);
    if (std::fabs(side) <= kOnAxisTolerance) {
      throw Error(ErrorKind::folding_divergence,
                  "axis " + std::to_string(i) + " passes through v_1; halfplane orientation undefined");
    }
    if (side < 0) normal = {-normal.x, -normal.y};
    axes.push_back(FoldAxis{normal, i, k, k % 2 == 1});
    k = (k + 1) / 2;
  }
  return axes;
}

std::pair<Vec2, bool> conditional_reflect(Vec2 x, const FoldAxis& axis) {
  if (dot(axis.normal, x) >= -kOnAxisTolerance) return {x, true};
  return {reflect(x, axis.normal), false};
}

namespace {

FoldingSequence fold(Vec2 start, std::span<const FoldAxis> axes) {
  FoldingSequence seq;
  seq.points.reserve(axes.size() + 1);
  seq.side_flags.reserve(axes.size());
  seq.points.push_back(start);
  for (const auto& axis : axes) {
    auto [next, kept] = conditional_reflect(seq.points.back(), axis);
    seq.points.push_back(next);
    seq.side_flags.push_back(kept);
  }
  return seq;
}

}  // namespace

FoldingSequence vertex_folding_sequence(Vec2 v, std::span<const FoldAxis> axes, Vec2 terminal) {
  FoldingSequence seq = fold(v, axes);
  if (!near(seq.terminal(), terminal, kTerminalTolerance)) {
    throw Error(ErrorKind::folding_divergence, "vertex " + describe(v) + " folds to " +
                                                   describe(seq.terminal()) + " instead of " +
                                                   describe(terminal));
  }
  return seq;
}

FoldingSequence facet_folding_sequence(Vec2 a, double beta, std::span<const FoldAxis> axes,
                                       std::pair<Vec2, Vec2> terminal_normals) {
  (void)beta;  // reflections fix the origin, so beta is invariant
  FoldingSequence seq = fold(a, axes);
  const double tol = kTerminalTolerance * std::max(1.0, std::hypot(a.x, a.y));
  if (!near(seq.terminal(), terminal_normals.first, tol) &&
      !near(seq.terminal(), terminal_normals.second, tol)) {
    throw Error(ErrorKind::folding_divergence, "facet normal " + describe(a) + " folds to " +
                                                   describe(seq.terminal()) +
                                                   ", not a facet through v_1");
  }
  return seq;
}

TelescopingReport telescoping_slack_check(Vec2 facet_normal, double beta, Vec2 vertex,
                                          std::span<const FoldAxis> axes) {
  FoldingSequence fa = fold(facet_normal, axes);
  FoldingSequence fv = fold(vertex, axes);
  TelescopingReport report;
  report.initial_slack = beta - dot(facet_normal, vertex);
  bool ok = true;
  for (std::size_t i = 0; i < axes.size(); ++i) {
    const Vec2 a = fa.points[i];
    const Vec2 v = fv.points[i];
    TelescopingStep step;
    step.lhs = beta - dot(a, v);
    step.opposite_sides = fa.side_flags[i] != fv.side_flags[i];
    if (step.opposite_sides) {
      step.correction = 2.0 * std::fabs(dot(axes[i].normal, a)) * std::fabs(dot(axes[i].normal, v));
    }
    step.rhs = beta - dot(fa.points[i + 1], fv.points[i + 1]) + step.correction;
    step.error = std::fabs(step.lhs - step.rhs);
    ok = ok && step.error <= 1e-10;
    report.correction_sum += step.correction;
    report.steps.push_back(step);
  }
  report.final_slack = beta - dot(fa.terminal(), fv.terminal());
  report.pass = ok && std::fabs(report.final_slack) <= kTerminalTolerance;
  return report;
}

double PolygonFactorization::slack_entry(std::size_t facet, std::size_t vertex) const {
  const auto& v = polygon.vertex(vertex);
  return hrep.b[facet] - (hrep.A(facet, 0) * v.x + hrep.A(facet, 1) * v.y);
}

PolygonFactorization build_polygon_factorization(std::size_t n, std::size_t slack_cap) {
  if (n < 3) throw Error(ErrorKind::invalid_size, "polygon factorization needs n >= 3");
  PolygonFactorization pf{n,
                          0,
                          make_regular_ngon(static_cast<int>(n)),
                          {},
                          folding_axes(n),
                          {},
                          std::nullopt};
  pf.q = pf.axes.size();
  pf.hrep = polygon_to_hrep(pf.polygon);

  const std::size_t r = 2 * pf.q;
  const double root2 = std::numbers::sqrt2;
  Matrix<double> t(n, r);
  Matrix<double> u(r, n);

  const Vec2 v1 = to_vec(pf.polygon.vertex(0));
  const std::pair<Vec2, Vec2> terminal_normals{{pf.hrep.A(0, 0), pf.hrep.A(0, 1)},
                                               {pf.hrep.A(n - 1, 0), pf.hrep.A(n - 1, 1)}};

  for (std::size_t i = 0; i < n; ++i) {
    Vec2 a{pf.hrep.A(i, 0), pf.hrep.A(i, 1)};
    FoldingSequence seq = facet_folding_sequence(a, pf.hrep.b[i], pf.axes, terminal_normals);
    for (std::size_t s = 0; s < pf.q; ++s) {
      double d = root2 * std::fabs(dot(pf.axes[s].normal, seq.points[s]));
      if (seq.side_flags[s]) {
        t(i, 2 * s + 1) = d;
      } else {
        t(i, 2 * s) = d;
      }
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    FoldingSequence seq = vertex_folding_sequence(to_vec(pf.polygon.vertex(j)), pf.axes, v1);
    for (std::size_t s = 0; s < pf.q; ++s) {
      double d = root2 * std::fabs(dot(pf.axes[s].normal, seq.points[s]));
      if (seq.side_flags[s]) {
        u(2 * s, j) = d;
      } else {
        u(2 * s + 1, j) = d;
      }
    }
  }
  pf.factorization = NonnegFactorization<double>{std::move(t), std::move(u)};

  if (n <= slack_cap) {
    Matrix<double> s(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) s(i, j) = pf.slack_entry(i, j);
    pf.slack = SlackMatrix<double>(std::move(s));
  }
  return pf;
}

VerificationReport verify_polygon_factorization(const PolygonFactorization& pf, double rel_tol,
                                                std::size_t full_cap, std::size_t samples,
                                                std::uint64_t seed) {
  const std::size_t n = pf.n;
  const std::size_t r = pf.rank();
  const auto& f = pf.factorization;

  // Column-major copy of U for contiguous dot products.
  std::vector<double> ut(n * r);
  for (std::size_t l = 0; l < r; ++l)
    for (std::size_t j = 0; j < n; ++j) ut[j * r + l] = f.U(l, j);

  auto entry = [&](std::size_t i, std::size_t j) {
    return pf.slack ? (*pf.slack)(i, j) : std::max(0.0, pf.slack_entry(i, j));
  };
  auto product = [&](std::size_t i, std::size_t j) {
    auto trow = f.T.row(i);
    const double* ucol = ut.data() + j * r;
    double acc = 0.0;
    for (std::size_t l = 0; l < r; ++l) acc += trow[l] * ucol[l];
    return acc;
  };

  VerificationReport report;
  report.mode = ScalarMode::float64;
  report.nonnegative_t = is_nonnegative(f.T);
  report.nonnegative_u = is_nonnegative(f.U);

  double norm = 0.0;
  double worst = 0.0;
  auto visit = [&](std::size_t i, std::size_t j) {
    double s = entry(i, j);
    norm = std::max(norm, s);
    worst = std::max(worst, std::fabs(s - product(i, j)));
  };

  if (n <= full_cap) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) visit(i, j);
    report.entries_checked = n * n;
  } else {
    // Every facet attains the same maximum slack, so one full row gives ||S||.
    for (std::size_t j = 0; j < n; ++j) visit(0, j);
    std::mt19937_64 rng(seed);
    for (std::size_t s = 0; s < samples; ++s) {
      std::size_t i = detail::uniform_index(rng, n);
      std::size_t j = detail::uniform_index(rng, n);
      visit(i, j);
    }
    report.entries_checked = samples + n;
    report.sampled = true;
  }
  report.slack_norm = norm;
  report.max_residual = worst;
  report.threshold = rel_tol * norm;
  report.pass = report.nonnegative_t && report.nonnegative_u && worst <= report.threshold;
  return report;
}

}  // namespace polyfold
