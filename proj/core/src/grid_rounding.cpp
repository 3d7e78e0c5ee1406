#include "polyfold/grid_rounding.hpp"

#include <algorithm>
#include <string>

#include "polyfold/error.hpp"
#include "polyfold/linalg.hpp"
#include "polyfold/lp.hpp"

namespace polyfold {

namespace {

bool is_integral(const Rational& x) { return x.get_den() == 1; }

Integer floor_of(const Rational& x) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return q;
}

// C(n, k), saturating at cap + 1.
std::size_t bounded_binomial(std::size_t n, std::size_t k, std::size_t cap) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 acc = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    acc = acc * (n - k + i) / i;
    if (acc > cap) return cap + 1;
  }
  return static_cast<std::size_t>(acc);
}

}  // namespace

Integer compute_delta(int d, const Integer& grid_bound) {
  Integer base = Integer(d + 1) * grid_bound;
  Integer out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(d));
  return out;
}

CoefficientBoundReport check_coefficient_bounds(const LinearSystem<Rational>& h, const Integer& delta,
                                                const SlackMatrix<Rational>* slack) {
  CoefficientBoundReport report;
  report.max_coefficient = std::max(max_abs(h.A), max_abs(std::span<const Rational>(h.b)));
  report.coefficients_ok = report.max_coefficient <= Rational(delta);
  report.slack_ok = true;
  if (slack != nullptr) {
    report.max_slack = slack->max_entry();
    report.slack_ok = report.max_slack <= Rational(delta * delta);
  }
  report.pass = report.coefficients_ok && report.slack_ok;
  return report;
}

RowSelection select_max_volume_rows(const Matrix<Rational>& m, std::size_t k, std::size_t exhaustive_cap) {
  const std::size_t rows = m.rows();
  if (k == 0 || k > rows) {
    throw Error(ErrorKind::degenerate_input, "cannot select " + std::to_string(k) + " of " +
                                                 std::to_string(rows) + " rows");
  }
  RowSelection best;
  best.volume_squared = 0;

  if (bounded_binomial(rows, k, exhaustive_cap) <= exhaustive_cap) {
    best.exhaustive = true;
    std::vector<std::size_t> comb(k);
    for (std::size_t i = 0; i < k; ++i) comb[i] = i;
    while (true) {
      Rational vol = gram_determinant(m, comb);
      if (vol > best.volume_squared) {
        best.volume_squared = vol;
        best.rows = comb;
      }
      std::size_t i = k;
      while (i > 0 && comb[i - 1] == rows - k + (i - 1)) --i;
      if (i == 0) break;
      ++comb[i - 1];
      for (std::size_t j = i; j < k; ++j) comb[j] = comb[j - 1] + 1;
    }
  } else {
    std::vector<std::size_t> chosen;
    std::vector<bool> used(rows, false);
    for (std::size_t step = 0; step < k; ++step) {
      Rational top = -1;
      std::size_t pick = rows;
      for (std::size_t i = 0; i < rows; ++i) {
        if (used[i]) continue;
        chosen.push_back(i);
        Rational vol = gram_determinant(m, chosen);
        chosen.pop_back();
        if (vol > top) {
          top = vol;
          pick = i;
        }
      }
      chosen.push_back(pick);
      used[pick] = true;
    }
    Rational vol = gram_determinant(m, chosen);
    bool improved = true;
    while (improved && vol > 0) {
      improved = false;
      for (std::size_t a = 0; a < k && !improved; ++a) {
        for (std::size_t cand = 0; cand < rows && !improved; ++cand) {
          if (used[cand]) continue;
          std::size_t old = chosen[a];
          chosen[a] = cand;
          Rational trial = gram_determinant(m, chosen);
          if (trial > vol) {
            vol = trial;
            used[old] = false;
            used[cand] = true;
            improved = true;
          } else {
            chosen[a] = old;
          }
        }
      }
    }
    std::sort(chosen.begin(), chosen.end());
    best.rows = chosen;
    best.volume_squared = vol;
  }
  if (best.volume_squared <= 0) {
    throw Error(ErrorKind::degenerate_input, "no " + std::to_string(k) + " linearly independent rows");
  }
  return best;
}

bool check_cramer_bound(const Matrix<Rational>& m, std::span<const std::size_t> selected) {
  const std::size_t k = selected.size();
  Matrix<Rational> gram(k, k);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) gram(a, b) = dot<Rational>(m.row(selected[a]), m.row(selected[b]));
  for (std::size_t l = 0; l < m.rows(); ++l) {
    if (std::find(selected.begin(), selected.end(), l) != selected.end()) continue;
    std::vector<Rational> rhs(k);
    for (std::size_t a = 0; a < k; ++a) rhs[a] = dot<Rational>(m.row(selected[a]), m.row(l));
    auto lambda = solve_square(gram, rhs);
    if (!lambda) return false;
    // The row must actually lie in the span.
    for (std::size_t c = 0; c < m.cols(); ++c) {
      Rational acc = 0;
      for (std::size_t a = 0; a < k; ++a) acc += (*lambda)[a] * m(selected[a], c);
      if (acc != m(l, c)) return false;
    }
    for (const Rational& coef : *lambda) {
      if (abs_value(coef) > 1) return false;
    }
  }
  return true;
}

RoundedSystem round_system(const Matrix<Rational>& a, const Matrix<Rational>& t, std::span<const Rational> b,
                           std::span<const std::size_t> selected, const Integer& delta, std::size_t r,
                           std::size_t d) {
  if (a.cols() != d || t.cols() != r || a.rows() != t.rows() || a.rows() != b.size()) {
    throw Error(ErrorKind::invalid_input, "round: inconsistent shapes");
  }
  if (selected.size() > d + r) {
    throw Error(ErrorKind::invalid_input, "round: more than d + r rows selected");
  }
  if (!is_nonnegative(t) || max_abs(t) > Rational(delta)) {
    throw Error(ErrorKind::invalid_input, "round: T must be nonnegative with ||T|| <= delta");
  }
  RoundedSystem out;
  out.d = d;
  out.r = r;
  out.delta = delta;
  out.epsilon = Rational(1, 4 * (d + r));
  out.step = Rational(Integer(1), Integer(4 * r * (d + r)) * delta);
  out.step.canonicalize();
  out.A_bar = Matrix<Rational>(d + r, d);
  out.T_bar = Matrix<Rational>(d + r, r);
  out.b_bar.assign(d + r, Rational(0));
  out.source_rows.assign(selected.begin(), selected.end());

  const Rational half(1, 2);
  for (std::size_t row = 0; row < selected.size(); ++row) {
    const std::size_t i = selected[row];
    if (i >= a.rows()) throw Error(ErrorKind::invalid_input, "round: selected row out of range");
    for (std::size_t c = 0; c < d; ++c) {
      if (!is_integral(a(i, c))) throw Error(ErrorKind::invalid_input, "round: A is not integral");
      out.A_bar(row, c) = a(i, c);
    }
    if (!is_integral(b[i])) throw Error(ErrorKind::invalid_input, "round: b is not integral");
    out.b_bar[row] = b[i];
    for (std::size_t l = 0; l < r; ++l) {
      Rational units = t(i, l) / out.step;
      Integer fl = floor_of(units);
      if (units - fl > half) fl += 1;
      out.T_bar(row, l) = Rational(fl) * out.step;
    }
  }
  return out;
}

bool check_rounded_invariants(const RoundedSystem& s) {
  const std::size_t rows = s.d + s.r;
  if (s.A_bar.rows() != rows || s.T_bar.rows() != rows || s.b_bar.size() != rows) return false;
  if (s.A_bar.cols() != s.d || s.T_bar.cols() != s.r) return false;
  const Rational delta(s.delta);
  for (const auto& x : s.A_bar.data())
    if (!is_integral(x) || abs_value(x) > delta) return false;
  for (const auto& x : s.b_bar)
    if (!is_integral(x) || abs_value(x) > delta) return false;
  for (const auto& x : s.T_bar.data()) {
    if (x < 0 || x > delta) return false;
    if (!is_integral(Rational(x / s.step))) return false;
  }
  return s.epsilon == Rational(1, 4 * rows) && s.step == Rational(Integer(1), Integer(4 * s.r * rows) * s.delta);
}

bool membership_test(const RoundedSystem& s, std::span<const Rational> x) {
  if (x.size() != s.d) throw Error(ErrorKind::invalid_input, "membership: wrong point dimension");
  LPProblem<Rational> lp(s.r);
  lp.sense = ObjectiveSense::feasibility;
  for (std::size_t l = 0; l < s.r; ++l) lp.set_bounds(l, Rational(0), Rational(s.delta));
  for (std::size_t i = 0; i < s.d + s.r; ++i) {
    Rational residual = -s.b_bar[i];
    for (std::size_t c = 0; c < s.d; ++c) residual += s.A_bar(i, c) * x[c];
    auto trow = s.T_bar.row(i);
    if (std::all_of(trow.begin(), trow.end(), [](const Rational& v) { return v == 0; })) {
      if (abs_value(residual) > s.epsilon) return false;
      continue;
    }
    lp.add_range(std::vector<Rational>(trow.begin(), trow.end()), Rational(-s.epsilon - residual),
                 Rational(s.epsilon - residual));
  }
  if (lp.rows.empty()) return true;
  return solve(lp).status != LPStatus::infeasible;
}

RecoveryReport verify_recovery(const RoundedSystem& system, const Polygon<Rational>& polygon, std::size_t cap) {
  for (const auto& v : polygon.vertices()) {
    if (!is_integral(v.x) || !is_integral(v.y)) {
      throw Error(ErrorKind::invalid_input, "recovery: polygon vertices must be integral");
    }
  }
  auto h = polygon_to_hrep(polygon);
  Integer xmin = polygon.vertex(0).x.get_num(), xmax = xmin;
  Integer ymin = polygon.vertex(0).y.get_num(), ymax = ymin;
  for (const auto& v : polygon.vertices()) {
    xmin = std::min(xmin, v.x.get_num());
    xmax = std::max(xmax, v.x.get_num());
    ymin = std::min(ymin, v.y.get_num());
    ymax = std::max(ymax, v.y.get_num());
  }
  Integer count = (xmax - xmin + 1) * (ymax - ymin + 1);
  if (count > Integer(static_cast<unsigned long>(cap))) {
    throw Error(ErrorKind::too_large, "recovery: bounding box holds " + count.get_str() +
                                          " lattice points, cap is " + std::to_string(cap));
  }
  RecoveryReport report;
  std::vector<Rational> x(2);
  for (long px = xmin.get_si(); px <= xmax.get_si(); ++px) {
    for (long py = ymin.get_si(); py <= ymax.get_si(); ++py) {
      x[0] = px;
      x[1] = py;
      bool expected = satisfies<Rational>(h, x);
      bool got = membership_test(system, x);
      ++report.points_checked;
      if (expected) ++report.members;
      if (expected != got) report.disagreements.push_back({px, py});
    }
  }
  report.pass = report.disagreements.empty();
  return report;
}

RoundingPipeline run_rounding_pipeline(const Polygon<Rational>& polygon,
                                       const NonnegFactorization<Rational>& factorization,
                                       std::optional<Integer> grid_bound) {
  const std::size_t d = 2;
  RoundingPipeline out;
  for (const auto& v : polygon.vertices()) {
    if (!is_integral(v.x) || !is_integral(v.y)) {
      throw Error(ErrorKind::invalid_input, "rounding: polygon vertices must be integral");
    }
  }
  out.hrep = polygon_to_hrep(polygon);
  auto points = polygon.vertex_points();
  out.slack = slack_matrix(out.hrep, std::span<const Point<Rational>>(points));
  auto check = verify_factorization(out.slack, factorization);
  if (!check.pass) {
    throw Error(ErrorKind::invalid_input, "rounding: factorization does not reproduce the slack matrix");
  }

  if (grid_bound) {
    out.grid_bound = *grid_bound;
  } else {
    out.grid_bound = 2;
    for (const auto& v : polygon.vertices()) {
      out.grid_bound = std::max(out.grid_bound, Integer(abs(v.x.get_num())));
      out.grid_bound = std::max(out.grid_bound, Integer(abs(v.y.get_num())));
    }
  }
  out.delta = compute_delta(static_cast<int>(d), out.grid_bound);
  out.coefficient_bounds = check_coefficient_bounds(out.hrep, out.delta, &out.slack);

  out.normalized = normalize_pair(prune_zero_components(factorization));
  const Rational delta(out.delta);
  out.factor_bounds_ok = max_abs(out.normalized.T) <= delta && max_abs(out.normalized.U) <= delta;
  out.lemma1_ok = check_lemma1_bound(out.normalized);
  if (!out.factor_bounds_ok) {
    throw Error(ErrorKind::invalid_input, "rounding: normalized factors exceed delta");
  }

  const std::size_t r = out.normalized.rank();
  Matrix<Rational> stacked(out.hrep.rows(), d + r);
  for (std::size_t i = 0; i < out.hrep.rows(); ++i) {
    for (std::size_t c = 0; c < d; ++c) stacked(i, c) = out.hrep.A(i, c);
    for (std::size_t l = 0; l < r; ++l) stacked(i, d + l) = out.normalized.T(i, l);
  }
  out.span_dimension = exact_rank(stacked);
  out.selection = select_max_volume_rows(stacked, out.span_dimension);
  out.cramer_ok = check_cramer_bound(stacked, out.selection.rows);
  out.system = round_system(out.hrep.A, out.normalized.T, out.hrep.b, out.selection.rows, out.delta, r, d);
  return out;
}

}  // namespace polyfold
