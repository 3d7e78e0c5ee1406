#include <gtest/gtest.h>

#include <random>

#include "polyfold/error.hpp"
#include "polyfold/lp.hpp"

using namespace polyfold;

TEST(LP, MaxSingleVariable) {
  LPProblem<Rational> p(1);
  p.objective[0] = 1;
  p.add_less_equal({Rational(1)}, Rational(3));
  auto r = solve(p);
  ASSERT_EQ(r.status, LPStatus::optimal);
  EXPECT_EQ(r.value, 3);
  EXPECT_EQ(r.point[0], 3);
}

TEST(LP, InfeasibleBox) {
  LPProblem<Rational> p(2);
  p.sense = ObjectiveSense::feasibility;
  p.set_bounds(0, Rational(0), Rational(1));
  p.set_bounds(1, Rational(0), Rational(1));
  p.add_less_equal({Rational(1), Rational(1)}, Rational(-1));
  EXPECT_EQ(solve(p).status, LPStatus::infeasible);

  LPProblem<double> q(2);
  q.sense = ObjectiveSense::feasibility;
  q.set_bounds(0, 0.0, 1.0);
  q.set_bounds(1, 0.0, 1.0);
  q.add_less_equal({1.0, 1.0}, -1.0);
  EXPECT_EQ(solve(q).status, LPStatus::infeasible);
}

TEST(LP, Unbounded) {
  LPProblem<Rational> p(2);
  p.objective = {Rational(1), Rational(1)};
  p.add_greater_equal({Rational(1), Rational(-1)}, Rational(0));
  EXPECT_EQ(solve(p).status, LPStatus::unbounded);
}

TEST(LP, FreeVariablesAndEqualities) {
  // max x + y s.t. x - y = 1, x + 2y <= 4, x, y free -> x = 2, y = 1.
  LPProblem<Rational> p(2);
  p.set_free(0);
  p.set_free(1);
  p.objective = {Rational(1), Rational(1)};
  p.add_equal({Rational(1), Rational(-1)}, Rational(1));
  p.add_less_equal({Rational(1), Rational(2)}, Rational(4));
  auto r = solve(p);
  ASSERT_EQ(r.status, LPStatus::optimal);
  EXPECT_EQ(r.value, 3);
  EXPECT_EQ(constraint_violation(p, r.point), 0);
}

TEST(LP, NegativeLowerBounds) {
  // max -x s.t. x in [-5, 2], x >= -3 -> x = -3.
  LPProblem<Rational> p(1);
  p.set_bounds(0, Rational(-5), Rational(2));
  p.objective[0] = -1;
  p.add_greater_equal({Rational(1)}, Rational(-3));
  auto r = solve(p);
  ASSERT_EQ(r.status, LPStatus::optimal);
  EXPECT_EQ(r.point[0], -3);
}

TEST(LP, BoxAgainstBruteForce) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> coef(-5, 5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 1 + trial % 4;
    LPProblem<Rational> p(d);
    std::vector<Rational> lo(d), hi(d);
    for (std::size_t j = 0; j < d; ++j) {
      lo[j] = coef(rng);
      hi[j] = lo[j] + 1 + std::abs(coef(rng));
      p.set_bounds(j, lo[j], hi[j]);
      p.objective[j] = coef(rng);
    }
    auto r = solve(p);
    ASSERT_EQ(r.status, LPStatus::optimal);
    Rational best;
    bool first = true;
    for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
      Rational v = 0;
      for (std::size_t j = 0; j < d; ++j) v += p.objective[j] * ((mask >> j) & 1 ? hi[j] : lo[j]);
      if (first || v > best) best = v;
      first = false;
    }
    EXPECT_EQ(r.value, best) << "trial " << trial;
    EXPECT_EQ(constraint_violation(p, r.point), 0);
  }
}

TEST(LP, FloatMatchesRational) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> coef(-4, 6);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 3, m = 4;
    LPProblem<Rational> pr(n);
    LPProblem<double> pd(n);
    for (std::size_t j = 0; j < n; ++j) {
      int c = coef(rng);
      pr.objective[j] = c;
      pd.objective[j] = c;
      pr.set_bounds(j, Rational(0), Rational(10));
      pd.set_bounds(j, 0.0, 10.0);
    }
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<Rational> a(n);
      std::vector<double> ad(n);
      for (std::size_t j = 0; j < n; ++j) {
        int c = coef(rng);
        a[j] = c;
        ad[j] = c;
      }
      int b = 1 + std::abs(coef(rng));
      pr.add_less_equal(a, Rational(b));
      pd.add_less_equal(ad, double(b));
    }
    auto rr = solve(pr);
    auto rd = solve(pd);
    ASSERT_EQ(rr.status, rd.status) << trial;
    if (rr.status == LPStatus::optimal) {
      EXPECT_NEAR(rd.value, rr.value.get_d(), 1e-7 * std::max(1.0, std::fabs(rr.value.get_d())));
      EXPECT_LE(constraint_violation(pd, rd.point), 1e-8);
    }
  }
}

TEST(LP, BlandNeverRepeatsABasis) {
  // Beale's classic cycling example for Dantzig's rule.
  LPProblem<Rational> p(4);
  p.objective = {Rational(3, 4), Rational(-150), Rational(1, 50), Rational(-6)};
  p.add_less_equal({Rational(1, 4), Rational(-60), Rational(-1, 25), Rational(9)}, Rational(0));
  p.add_less_equal({Rational(1, 2), Rational(-90), Rational(-1, 50), Rational(3)}, Rational(0));
  p.add_less_equal({Rational(0), Rational(0), Rational(1), Rational(0)}, Rational(1));
  SolveOptions opt;
  opt.check_cycling = true;
  auto r = solve(p, opt);
  ASSERT_EQ(r.status, LPStatus::optimal);
  EXPECT_EQ(r.value, Rational(1, 20));
}

TEST(LP, DegenerateRandomNoCycle) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> coef(-2, 2);
  SolveOptions opt;
  opt.check_cycling = true;
  for (int trial = 0; trial < 100; ++trial) {
    LPProblem<Rational> p(4);
    for (std::size_t j = 0; j < 4; ++j) {
      p.objective[j] = coef(rng);
      p.set_bounds(j, Rational(0), Rational(3));
    }
    // Zero right-hand sides make the origin highly degenerate.
    for (int i = 0; i < 6; ++i) {
      std::vector<Rational> a(4);
      for (auto& x : a) x = coef(rng);
      p.add_less_equal(a, Rational(0));
    }
    EXPECT_NO_THROW(solve(p, opt));
  }
}
