#include <gtest/gtest.h>

#include "polyfold/error.hpp"
#include "polyfold/grid_rounding.hpp"
#include "polyfold/linalg.hpp"

using namespace polyfold;

namespace {

Matrix<Rational> rat(std::vector<std::vector<long>> rows) {
  Matrix<Rational> m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

NonnegFactorization<Rational> trivial_for(const Polygon<Rational>& p) {
  auto h = polygon_to_hrep(p);
  auto pts = p.vertex_points();
  return trivial_factorization(slack_matrix(h, std::span<const Point<Rational>>(pts)));
}

Matrix<Rational> stacked(const LinearSystem<Rational>& h, const Matrix<Rational>& t) {
  Matrix<Rational> m(h.rows(), h.dim() + t.cols());
  for (std::size_t i = 0; i < h.rows(); ++i) {
    for (std::size_t c = 0; c < h.dim(); ++c) m(i, c) = h.A(i, c);
    for (std::size_t l = 0; l < t.cols(); ++l) m(i, h.dim() + l) = t(i, l);
  }
  return m;
}

}  // namespace

TEST(Delta, Values) {
  EXPECT_EQ(compute_delta(2, 2), 36);
  EXPECT_EQ(compute_delta(3, 2), 512);
  for (long n = 3; n <= 8; ++n) EXPECT_EQ(compute_delta(2, Integer(4 * n * n)), Integer(144 * n * n * n * n));
}

TEST(CoefficientBounds, Examples) {
  auto p = make_grid_parabola_polygon(3, std::vector<int>{1, 2, 3});
  auto h = polygon_to_hrep(p);
  Integer delta = compute_delta(2, 36);
  EXPECT_EQ(delta, 144 * 81);
  EXPECT_TRUE(check_coefficient_bounds(h, delta).pass);

  auto scaled = h;
  for (std::size_t i = 0; i < scaled.rows(); ++i) {
    scaled.A(i, 0) *= Rational(delta * delta);
    scaled.b[i] *= Rational(delta * delta);
  }
  EXPECT_FALSE(check_coefficient_bounds(scaled, delta).pass);

  Polygon<Rational> sq({{2, 2}, {0, 2}, {0, 0}, {2, 0}});
  auto hs = polygon_to_hrep(sq);
  auto pts = sq.vertex_points();
  auto s = slack_matrix(hs, std::span<const Point<Rational>>(pts));
  auto rep = check_coefficient_bounds(hs, compute_delta(2, 2), &s);
  EXPECT_TRUE(rep.pass);
  EXPECT_LE(rep.max_coefficient, 4);
}

TEST(RowSelection, OrthogonalRows) {
  auto m = rat({{0, 0, 1}, {3, 0, 0}, {0, 2, 0}});
  auto sel = select_max_volume_rows(m, 2);
  EXPECT_EQ(sel.rows, (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(sel.volume_squared, 36);
  EXPECT_TRUE(sel.exhaustive);
}

TEST(RowSelection, Duplicates) {
  auto m = rat({{5, 0}, {5, 0}, {0, 1}});
  auto sel = select_max_volume_rows(m, 2);
  EXPECT_EQ(sel.rows.size(), 2u);
  EXPECT_NE(m.row(sel.rows[0])[0], m.row(sel.rows[1])[0]);
  auto greedy = select_max_volume_rows(m, 2, 0);
  EXPECT_FALSE(greedy.exhaustive);
  EXPECT_EQ(greedy.volume_squared, sel.volume_squared);
}

TEST(RowSelection, GreedyMatchesExhaustiveOnParabola) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto p = make_grid_parabola_polygon(4, seed);
    auto h = polygon_to_hrep(p);
    auto f = normalize_pair(trivial_for(p));
    auto m = stacked(h, f.T);
    std::size_t k = exact_rank(m);
    auto ex = select_max_volume_rows(m, k);
    auto gr = select_max_volume_rows(m, k, 0);
    EXPECT_TRUE(ex.exhaustive);
    EXPECT_EQ(gr.volume_squared, ex.volume_squared) << seed;
    EXPECT_TRUE(check_cramer_bound(m, ex.rows));
    EXPECT_TRUE(check_cramer_bound(m, gr.rows));
  }
}

TEST(RowSelection, Degenerate) {
  auto m = rat({{1, 1}, {2, 2}});
  try {
    select_max_volume_rows(m, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::degenerate_input);
  }
  EXPECT_THROW(select_max_volume_rows(m, 3), Error);
}

TEST(CramerBound, DetectsBadSelection) {
  auto m = rat({{1, 0}, {0, 1}, {3, 3}});
  std::vector<std::size_t> sel{0, 1};
  EXPECT_FALSE(check_cramer_bound(m, sel));
  auto best = select_max_volume_rows(m, 2);
  EXPECT_TRUE(check_cramer_bound(m, best.rows));
}

TEST(RoundSystem, GridFixpointAndHalfStep) {
  Integer delta = 36;
  const std::size_t d = 2, r = 1;
  Rational step(Integer(1), Integer(4 * r * (d + r)) * delta);
  auto a = rat({{1, 0}, {0, 1}});
  Matrix<Rational> t(2, 1);
  t(0, 0) = 5 * step;
  t(1, 0) = Rational(1, 2) + step / 4;
  std::vector<Rational> b{Rational(1), Rational(2)};
  std::vector<std::size_t> sel{0, 1};
  auto rs = round_system(a, t, b, sel, delta, r, d);
  EXPECT_EQ(rs.T_bar(0, 0), t(0, 0));
  EXPECT_LE(abs_value(Rational(rs.T_bar(1, 0) - t(1, 0))), step / 2);
  EXPECT_EQ(rs.A_bar.rows(), 3u);
  EXPECT_EQ(rs.T_bar(2, 0), 0);
  EXPECT_EQ(rs.epsilon, Rational(1, 12));
  EXPECT_TRUE(check_rounded_invariants(rs));
}

TEST(RoundSystem, TiesTowardZero) {
  Integer delta = 36;
  Rational step(Integer(1), Integer(4 * 3) * delta);
  auto a = rat({{1, 0}});
  Matrix<Rational> t(1, 1);
  t(0, 0) = 2 * step + step / 2;
  std::vector<Rational> b{Rational(0)};
  std::vector<std::size_t> sel{0};
  auto rs = round_system(a, t, b, sel, delta, 1, 2);
  EXPECT_EQ(rs.T_bar(0, 0), 2 * step);
}

TEST(RoundSystem, Preconditions) {
  auto a = rat({{1, 0}});
  Matrix<Rational> t(1, 1);
  std::vector<Rational> b{Rational(1)};
  std::vector<std::size_t> sel{0};
  t(0, 0) = 100;
  EXPECT_THROW(round_system(a, t, b, sel, Integer(36), 1, 2), Error);
  t(0, 0) = 1;
  std::vector<Rational> frac{Rational(1, 2)};
  EXPECT_THROW(round_system(a, t, frac, sel, Integer(36), 1, 2), Error);
  std::vector<std::size_t> many{0, 0, 0, 0};
  EXPECT_THROW(round_system(a, t, b, many, Integer(36), 1, 2), Error);
}

TEST(Pipeline, ParabolaFour) {
  auto p = make_grid_parabola_polygon(4, std::vector<int>{1, 3, 5, 8});
  auto run = run_rounding_pipeline(p, trivial_for(p), Integer(64));
  EXPECT_EQ(run.delta, 144 * 256);
  EXPECT_TRUE(run.coefficient_bounds.pass);
  EXPECT_TRUE(run.factor_bounds_ok);
  EXPECT_TRUE(run.lemma1_ok);
  EXPECT_TRUE(run.cramer_ok);
  EXPECT_EQ(run.span_dimension, 3u);
  EXPECT_TRUE(check_rounded_invariants(run.system));
  EXPECT_EQ(run.system.A_bar.rows(), 2 + run.system.r);
}

TEST(Membership, VertexInteriorOutside) {
  auto p = make_grid_parabola_polygon(4, std::vector<int>{1, 3, 5, 8});
  auto run = run_rounding_pipeline(p, trivial_for(p), Integer(64));
  for (const auto& v : p.vertices()) {
    std::vector<Rational> x{v.x, v.y};
    EXPECT_TRUE(membership_test(run.system, x));
  }
  std::vector<Rational> inside{Rational(3), Rational(15)};
  EXPECT_TRUE(membership_test(run.system, inside));
  std::vector<Rational> outside{Rational(3), Rational(8)};
  EXPECT_FALSE(membership_test(run.system, outside));
  std::vector<Rational> far{Rational(30), Rational(30)};
  EXPECT_FALSE(membership_test(run.system, far));
}

TEST(Recovery, SpecExamples) {
  auto p3 = make_grid_parabola_polygon(3, std::vector<int>{1, 2, 3});
  auto run3 = run_rounding_pipeline(p3, trivial_for(p3), Integer(36));
  auto rep3 = verify_recovery(run3.system, p3);
  EXPECT_EQ(rep3.points_checked, 27u);
  EXPECT_TRUE(rep3.pass);
  EXPECT_TRUE(rep3.disagreements.empty());

  Polygon<Rational> unit({{1, 1}, {0, 1}, {0, 0}, {1, 0}});
  auto runu = run_rounding_pipeline(unit, trivial_for(unit), Integer(2));
  auto repu = verify_recovery(runu.system, unit);
  EXPECT_EQ(repu.points_checked, 4u);
  EXPECT_EQ(repu.members, 4u);
  EXPECT_TRUE(repu.pass);
}

TEST(Recovery, CapExceeded) {
  auto p = make_grid_parabola_polygon(3, std::vector<int>{1, 2, 3});
  auto run = run_rounding_pipeline(p, trivial_for(p), Integer(36));
  try {
    verify_recovery(run.system, p, 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::too_large);
  }
}

TEST(Recovery, CorruptedSystemDisagrees) {
  auto p = make_grid_parabola_polygon(4, std::vector<int>{1, 3, 5, 8});
  auto run = run_rounding_pipeline(p, trivial_for(p), Integer(64));
  auto bad = run.system;
  bad.b_bar[0] += 5;
  EXPECT_FALSE(verify_recovery(bad, p).pass);
}

TEST(Pipeline, RejectsWrongFactorization) {
  auto p = make_grid_parabola_polygon(3, std::vector<int>{1, 2, 3});
  auto f = trivial_for(p);
  f.U(0, 0) += 1;
  EXPECT_THROW(run_rounding_pipeline(p, f), Error);
}
