#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "polyfold/error.hpp"
#include "polyfold/permutahedron_folding.hpp"
#include "polyfold/polytope.hpp"
#include "polyfold/slack.hpp"

using namespace polyfold;

namespace {

Polygon<Rational> square() {
  return Polygon<Rational>({{1, 1}, {-1, 1}, {-1, -1}, {1, -1}});
}

SlackMatrix<Rational> square_slack() {
  auto p = square();
  auto h = polygon_to_hrep(p);
  auto pts = p.vertex_points();
  return slack_matrix(h, std::span<const Point<Rational>>(pts));
}

template <class S>
Matrix<S> from_rows(std::vector<std::vector<S>> rows) {
  Matrix<S> m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

}  // namespace

TEST(SlackMatrix, Square) {
  auto s = square_slack();
  ASSERT_EQ(s.rows(), 4u);
  ASSERT_EQ(s.cols(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    int zeros = 0;
    for (std::size_t j = 0; j < 4; ++j) {
      EXPECT_TRUE(s(i, j) == 0 || s(i, j) == 2);
      zeros += s(i, j) == 0;
    }
    EXPECT_EQ(zeros, 2);
  }
  EXPECT_TRUE(s.is_tight());
}

TEST(SlackMatrix, PermutahedronEntry) {
  Permutahedron k(3);
  auto h = permutahedron_hrep(k);
  auto pts = permutahedron_vertices(k);
  auto s = slack_matrix(h, std::span<const Point<Rational>>(pts));
  ASSERT_EQ(s.rows(), 6u);
  ASSERT_EQ(s.cols(), 6u);
  // Row 0 is S = {1}; column 0 is (1, 2, 3).
  EXPECT_EQ(s(0, 0), 2);
}

TEST(SlackMatrix, OctagonOppositeVertex) {
  auto p = make_regular_ngon(8);
  auto h = polygon_to_hrep(p);
  auto pts = p.vertex_points();
  auto s = slack_matrix(h, std::span<const Point<double>>(pts));
  EXPECT_NEAR(s.max_entry(), 2.0, 1e-12);
  // Row 0 is edge (v0, v1); v4 and v5 are opposite.
  EXPECT_NEAR(s(0, 4), 2.0, 1e-12);
  EXPECT_NEAR(s(0, 5), 2.0, 1e-12);
}

TEST(SlackMatrix, NotContained) {
  auto h = polygon_to_hrep(square());
  std::vector<Point<Rational>> pts{{Rational(2), Rational(0)}};
  try {
    slack_matrix(h, std::span<const Point<Rational>>(pts));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::not_contained);
  }
}

TEST(SlackMatrix, FloatClamping) {
  Matrix<double> m = from_rows<double>({{1.0, -1e-12}, {0.0, 1.0}});
  SlackMatrix<double> s(m);
  EXPECT_EQ(s(0, 1), 0.0);
  Matrix<double> bad = from_rows<double>({{1.0, -1e-3}, {0.0, 1.0}});
  EXPECT_THROW(SlackMatrix<double>{bad}, Error);
}

TEST(Verify, TrivialFactorization) {
  auto s = square_slack();
  auto f = trivial_factorization(s);
  EXPECT_EQ(f.rank(), 4u);
  auto r = verify_factorization(s, f);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.max_residual, 0.0);
  EXPECT_EQ(r.mode, ScalarMode::rational);
}

TEST(Verify, PerturbationFails) {
  auto s = square_slack();
  auto f = trivial_factorization(s);
  f.U(1, 2) += 1;
  auto r = verify_factorization(s, f);
  EXPECT_FALSE(r.pass);
  Rational min_t = -1;
  for (std::size_t i = 0; i < f.T.rows(); ++i)
    if (f.T(i, 1) != 0 && (min_t < 0 || f.T(i, 1) < min_t)) min_t = f.T(i, 1);
  EXPECT_GE(r.max_residual, min_t.get_d());
}

TEST(Verify, NegativeFactorFails) {
  Matrix<double> s = from_rows<double>({{1.0}});
  SlackMatrix<double> sm(s);
  auto f = make_factorization(from_rows<double>({{-1.0}}), from_rows<double>({{-1.0}}));
  auto r = verify_factorization(sm, f);
  EXPECT_FALSE(r.nonnegative_t);
  EXPECT_FALSE(r.pass);
}

TEST(Verify, FloatTolerance) {
  auto s = SlackMatrix<double>(from_rows<double>({{2.0, 0.0}, {0.0, 2.0}}));
  auto f = make_factorization(from_rows<double>({{2.0, 0.0}, {0.0, 2.0}}),
                              from_rows<double>({{1.0 + 1e-12, 0.0}, {0.0, 1.0}}));
  EXPECT_TRUE(verify_factorization(s, f).pass);
  f.U(0, 0) = 1.0 + 1e-6;
  EXPECT_FALSE(verify_factorization(s, f).pass);
}

TEST(MakeFactorization, ShapeMismatch) {
  EXPECT_THROW(make_factorization(Matrix<double>(2, 3), Matrix<double>(2, 2)), Error);
}

TEST(Normalize, SpecExample) {
  auto f = make_factorization(from_rows<Rational>({{2}, {0}}), from_rows<Rational>({{Rational(1, 2), Rational(1, 2)}}));
  auto g = normalize_pair(f);
  EXPECT_EQ(g.T, from_rows<Rational>({{1}, {0}}));
  EXPECT_EQ(g.U, from_rows<Rational>({{1, 1}}));
  auto fd = make_factorization(from_rows<double>({{2}, {0}}), from_rows<double>({{0.5, 0.5}}));
  auto gd = normalize_pair(fd);
  EXPECT_DOUBLE_EQ(gd.T(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(gd.U(0, 1), 1.0);
}

TEST(Normalize, FixedPoint) {
  auto f = make_factorization(from_rows<Rational>({{1, 3}, {2, 0}}), from_rows<Rational>({{2, 1}, {0, 3}}));
  EXPECT_EQ(normalize_pair(f).T, f.T);
  EXPECT_EQ(normalize_pair(f).U, f.U);
}

TEST(Normalize, RandomPairPreservesProduct) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> d(0, 9);
  Matrix<Rational> t(3, 2), u(2, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t l = 0; l < 2; ++l) t(i, l) = d(rng) + 1;
  for (std::size_t l = 0; l < 2; ++l)
    for (std::size_t j = 0; j < 3; ++j) u(l, j) = Rational(d(rng) + 1, 3);
  auto f = make_factorization(t, u);
  auto g = normalize_pair(f);
  EXPECT_EQ(multiply(g.T, g.U), multiply(f.T, f.U));
  EXPECT_TRUE(lemma1_certificate(g));
  EXPECT_TRUE(check_lemma1_bound(g));
}

TEST(Normalize, IrrationalFactorSplits) {
  // The exact factor sqrt 2 is irrational and ||T|| ||U|| = ||TU||: two halves.
  auto f = make_factorization(from_rows<Rational>({{1}}), from_rows<Rational>({{2}}));
  auto g = normalize_pair(f);
  EXPECT_EQ(g.rank(), 2u);
  EXPECT_EQ(g.T, from_rows<Rational>({{1, 1}}));
  EXPECT_EQ(g.U, from_rows<Rational>({{1}, {1}}));
  EXPECT_TRUE(check_lemma1_bound(g));
  EXPECT_EQ(normalize_pair(g).T, g.T);
}

TEST(Normalize, IrrationalFactorInsideWindow) {
  // ||T|| ||U|| = 2 < ||TU|| = 4, so a rational factor exists without a split.
  auto f = make_factorization(from_rows<Rational>({{1, 2}}), from_rows<Rational>({{2}, {1}}));
  auto g = normalize_pair(f);
  EXPECT_EQ(g.rank(), 2u);
  EXPECT_EQ(multiply(g.T, g.U), multiply(f.T, f.U));
  EXPECT_TRUE(check_lemma1_bound(g));
}

TEST(Normalize, DegenerateFactor) {
  auto f = make_factorization(from_rows<Rational>({{0, 1}}), from_rows<Rational>({{1}, {1}}));
  try {
    normalize_pair(f);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::degenerate_factor);
  }
  auto pruned = prune_zero_components(f);
  EXPECT_EQ(pruned.rank(), 1u);
  EXPECT_EQ(multiply(pruned.T, pruned.U), multiply(f.T, f.U));
  EXPECT_EQ(f.degenerate_components(), std::vector<std::size_t>{0});
}

TEST(Lemma1, Examples) {
  auto eq = make_factorization(from_rows<Rational>({{2}}), from_rows<Rational>({{2}}));
  EXPECT_TRUE(check_lemma1_bound(eq));
  auto skew = make_factorization(from_rows<Rational>({{4}}), from_rows<Rational>({{1}}));
  EXPECT_FALSE(check_lemma1_bound(skew));
  EXPECT_TRUE(check_lemma1_bound(normalize_pair(skew)));
  auto sq = normalize_pair(trivial_factorization(square_slack()));
  EXPECT_TRUE(check_lemma1_bound(sq));
}

TEST(Lemma1, PermutahedronCertificate) {
  for (int n : {3, 4, 5}) {
    auto pf = build_permutahedron_factorization(n);
    auto g = normalize_pair(prune_zero_components(pf.factorization));
    EXPECT_TRUE(lemma1_certificate(g)) << n;
    EXPECT_EQ(multiply(g.T, g.U), pf.slack.entries()) << n;
  }
}
