// One line per acceptance criterion; exit status is nonzero if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

#include "cli.hpp"
#include "polyfold/bounds.hpp"
#include "polyfold/error.hpp"
#include "polyfold/extension.hpp"
#include "polyfold/grid_rounding.hpp"
#include "polyfold/permutahedron_folding.hpp"
#include "polyfold/polygon_folding.hpp"

namespace fs = std::filesystem;
using namespace polyfold;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  std::ostringstream failures;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      failures << " FAILED[" << what << "]";
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::size_t expected_polygon_rank(std::size_t n) {
  return 2 * static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(n))));
}

std::size_t factorial(int n) {
  std::size_t f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

template <class S, class Gen>
NonnegFactorization<S> random_pair(std::mt19937_64& rng, Gen&& gen) {
  std::uniform_int_distribution<std::size_t> dim(1, 6);
  std::size_t m = dim(rng), r = dim(rng), n = dim(rng);
  Matrix<S> t(m, r), u(r, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t l = 0; l < r; ++l) t(i, l) = gen();
  for (std::size_t l = 0; l < r; ++l)
    for (std::size_t j = 0; j < n; ++j) u(l, j) = gen();
  for (std::size_t l = 0; l < r; ++l) {
    t(rng() % m, l) += S(1);
    u(l, rng() % n) += S(1);
  }
  return make_factorization(std::move(t), std::move(u));
}

// n-subset of [2n] containing 1 and 2n.
std::vector<int> extreme_subset(int n, std::mt19937_64& rng) {
  std::vector<int> inner(2 * n - 2);
  std::iota(inner.begin(), inner.end(), 2);
  std::vector<int> out{1, 2 * n};
  std::sample(inner.begin(), inner.end(), std::back_inserter(out), n - 2, rng);
  std::sort(out.begin(), out.end());
  return out;
}

void ac1(Outcome& o, const fs::path& out) {
  auto t0 = Clock::now();
  cli::RunConfig cfg;
  cfg.subcommand = "ngon";
  cfg.n = 8;
  cfg.out = out / "ngon8";
  auto r = cli::run(cfg);
  double secs = seconds_since(t0);
  o.require(r.exit_code == 0, "exit code " + std::to_string(r.exit_code));
  o.require(r.summary.value("rank", 0) == 6, "rank");
  auto ver = read_json_file(cfg.out / "verification.json");
  o.require(!ver.value("sampled", true) && ver.value("entries_checked", 0) == 64, "full 8x8 check");
  o.require(ver.value("pass", false), "residual");
  o.require(secs < 1.0, "runtime");
  o.detail << "rank=" << r.summary.value("rank", 0) << " residual=" << ver.value("max_residual", -1.0)
           << " time=" << secs << "s";
}

void ac2(Outcome& o) {
  auto axes = folding_axes(15);
  auto pf = build_polygon_factorization(15);
  o.require(axes.size() == 4, "axes");
  o.require(pf.rank() == 8, "rank");
  o.require(verify_polygon_factorization(pf).pass, "verification");
  o.detail << "axes=" << axes.size() << " rank=" << pf.rank();
}

void ac3(Outcome& o) {
  auto t0 = Clock::now();
  for (std::size_t n : {3u, 4u, 5u, 8u, 15u, 16u, 17u, 100u, 1024u, 4096u}) {
    auto pf = build_polygon_factorization(n);
    auto ver = verify_polygon_factorization(pf);
    o.require(pf.rank() == expected_polygon_rank(n), "rank n=" + std::to_string(n));
    o.require(ver.pass && !ver.sampled && ver.entries_checked == n * n, "full check n=" + std::to_string(n));
  }
  double full = seconds_since(t0);
  o.require(full < 60.0, "full-check runtime");

  t0 = Clock::now();
  const std::size_t big = std::size_t{1} << 16;
  auto pf = build_polygon_factorization(big);
  auto ver = verify_polygon_factorization(pf, kFactorizationTolerance, kFullVerificationCap, kSampledEntries, 2024);
  double sampled = seconds_since(t0);
  o.require(pf.rank() == 32, "rank 2^16");
  o.require(ver.pass && ver.sampled && ver.entries_checked == kSampledEntries + big, "sampled check 2^16");
  o.require(sampled < 60.0, "sampled runtime");
  o.detail << "full=" << full << "s n=65536 rank=" << pf.rank() << " residual=" << ver.max_residual
           << " entries=" << ver.entries_checked << " (row 0 + random) time=" << sampled << "s";
}

void ac4(Outcome& o) {
  for (int n = 3; n <= 6; ++n) {
    auto t0 = Clock::now();
    auto pf = build_permutahedron_factorization(n);
    bool exact = multiply(pf.factorization.T, pf.factorization.U) == pf.slack.entries();
    auto ver = verify_factorization(pf.slack, pf.factorization);
    double secs = seconds_since(t0);
    std::string tag = " n=" + std::to_string(n);
    o.require(exact && ver.pass && ver.max_residual == 0.0, "exact" + tag);
    o.require(pf.slack.rows() == (std::size_t{1} << n) - 2 && pf.slack.cols() == factorial(n), "shape" + tag);
    o.require(pf.rank() == 2 * pf.network.size(), "rank" + tag);
    if (n == 6) o.require(secs < 60.0, "runtime n=6");
    o.detail << "n=" << n << ":" << pf.slack.rows() << "x" << pf.slack.cols() << ",r=" << pf.rank() << ","
             << secs << "s ";
  }
}

void ac5(Outcome& o) {
  std::size_t checked = 0;
  for (std::size_t n = 3; n <= 32; ++n) {
    auto pf = build_polygon_factorization(n);
    auto pts = pf.polygon.vertex_points();
    std::span<const Point<double>> span(pts);
    auto ext = build_extension(pf.hrep, pf.factorization, span);
    auto lift = lift_all_vertices(pf.factorization, pf.hrep, span);
    auto proj = check_projection_inclusion(ext, pf.hrep);
    o.require(lift.pass && lift.lifted == n, "lift n-gon " + std::to_string(n));
    o.require(proj.pass && proj.tight, "projection n-gon " + std::to_string(n));
    ++checked;
  }
  for (int n = 2; n <= 4; ++n) {
    auto pf = build_permutahedron_factorization(n);
    auto pts = permutahedron_vertices(pf.polytope);
    std::span<const Point<Rational>> span(pts);
    auto ext = build_extension(pf.hrep, pf.factorization, span);
    auto lift = lift_all_vertices(pf.factorization, pf.hrep, span);
    auto proj = check_projection_inclusion(ext, pf.hrep);
    o.require(lift.pass && proj.pass && proj.tight && proj.max_excess == 0.0 && proj.max_deficit == 0.0,
              "permutahedron " + std::to_string(n));
    ++checked;
  }
  o.detail << "constructions=" << checked << " (n-gons 3..32, permutahedra 2..4)";
}

void ac6(Outcome& o) {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> num(0, 40), den(1, 9);
  std::exponential_distribution<double> mag(0.3);
  std::bernoulli_distribution zero(0.3);
  std::size_t rational = 0, floating = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    auto f = random_pair<Rational>(rng, [&] { 
      Rational q(zero(rng) ? 0 : num(rng), den(rng));
      q.canonicalize();
      return q;
    });
    auto g = normalize_pair(f);
    bool ok = multiply(g.T, g.U) == multiply(f.T, f.U) && check_lemma1_bound(g);
    o.require(ok, "rational pair " + std::to_string(trial));
    rational += ok;
    auto h = normalize_pair(random_pair<double>(rng, [&] { return zero(rng) ? 0.0 : mag(rng); }));
    bool fok = check_lemma1_bound(h);
    o.require(fok, "float pair " + std::to_string(trial));
    floating += fok;
  }
  std::size_t constructions = 0;
  for (std::size_t n : {3u, 4u, 5u, 8u, 15u, 16u, 17u, 100u, 1024u}) {
    auto pf = build_polygon_factorization(n);
    o.require(check_lemma1_bound(normalize_pair(prune_zero_components(pf.factorization))),
              "n-gon " + std::to_string(n));
    ++constructions;
  }
  for (int n = 2; n <= 6; ++n) {
    auto pf = build_permutahedron_factorization(n);
    o.require(check_lemma1_bound(normalize_pair(prune_zero_components(pf.factorization))),
              "permutahedron " + std::to_string(n));
    ++constructions;
  }
  for (int n = 3; n <= 8; ++n) {
    auto p = make_grid_parabola_polygon(n, random_parabola_subset(n, 6));
    auto h = polygon_to_hrep(p);
    auto pts = p.vertex_points();
    auto f = trivial_factorization(slack_matrix(h, std::span<const Point<Rational>>(pts)));
    o.require(check_lemma1_bound(normalize_pair(prune_zero_components(f))), "gridgon " + std::to_string(n));
    ++constructions;
  }
  o.detail << "rational_pairs=" << rational << "/1000 float_pairs=" << floating
           << "/1000 constructions=" << constructions;
}

void ac7(Outcome& o) {
  std::mt19937_64 rng(7);
  std::size_t points = 0, disagreements = 0;
  for (int n = 3; n <= 8; ++n) {
    auto t0 = Clock::now();
    auto subset = extreme_subset(n, rng);
    auto p = make_grid_parabola_polygon(n, subset);
    auto h = polygon_to_hrep(p);
    auto pts = p.vertex_points();
    auto f = trivial_factorization(slack_matrix(h, std::span<const Point<Rational>>(pts)));
    auto run = run_rounding_pipeline(p, f, Integer(4 * n * n));
    auto rec = verify_recovery(run.system, p);
    double secs = seconds_since(t0);
    std::string tag = " n=" + std::to_string(n);
    Integer n4 = Integer(n) * n * n * n;
    o.require(run.delta == Integer(144) * n4, "delta" + tag);
    o.require(run.coefficient_bounds.pass && run.factor_bounds_ok && run.lemma1_ok && run.cramer_ok,
              "preconditions" + tag);
    o.require(check_rounded_invariants(run.system), "invariants" + tag);
    o.require(rec.pass && rec.disagreements.empty(), "recovery" + tag);
    if (n == 8) o.require(secs < 120.0, "runtime n=8");
    points += rec.points_checked;
    disagreements += rec.disagreements.size();
    o.detail << "n=" << n << ":" << rec.points_checked << "pts," << secs << "s ";
  }
  o.detail << "total_points=" << points << " disagreements=" << disagreements;
}

void ac8(Outcome& o) {
  std::size_t constructions = 0;
  for (std::size_t n : {3u, 4u, 5u, 8u, 15u, 16u, 17u, 32u, 100u, 512u}) {
    auto pf = build_polygon_factorization(n);
    auto b = compute_bounds(*pf.slack, polygon_face_count(static_cast<int>(n)), static_cast<long>(pf.rank()));
    long log_bound = static_cast<long>(std::ceil(std::log2(2.0 * n + 2.0)));
    o.require(b.face_count_bound == log_bound && log_bound <= static_cast<long>(pf.rank()),
              "face bound n-gon " + std::to_string(n));
    o.require(b.linear_rank_bound <= static_cast<long>(pf.rank()) && *b.gap >= 0, "rank n-gon " + std::to_string(n));
    ++constructions;
  }
  for (int n = 2; n <= 6; ++n) {
    auto pf = build_permutahedron_factorization(n);
    auto b = compute_bounds(pf.slack, permutahedron_face_count(n), static_cast<long>(pf.rank()));
    o.require(*b.gap >= 0, "permutahedron " + std::to_string(n));
    o.require(b.linear_rank_bound == n, "permutahedron rank(S) " + std::to_string(n));
    ++constructions;
  }
  for (int n = 3; n <= 8; ++n) {
    auto p = make_grid_parabola_polygon(n, random_parabola_subset(n, 8));
    auto h = polygon_to_hrep(p);
    auto pts = p.vertex_points();
    auto slack = slack_matrix(h, std::span<const Point<Rational>>(pts));
    auto b = compute_bounds(slack, polygon_face_count(n), static_cast<long>(slack.cols()));
    o.require(b.linear_rank_bound == 3, "rational n-gon rank(S)=3 n=" + std::to_string(n));
    o.require(*b.gap >= 0, "rational n-gon gap n=" + std::to_string(n));
    ++constructions;
  }
  o.detail << "constructions=" << constructions;
}

}  // namespace

int main(int argc, char** argv) {
  fs::path out = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "polyfold_acceptance";
  fs::remove_all(out);
  fs::create_directories(out);

  bool all = true;
  std::vector<bool> results(10, true);
  auto report = [&](int k, const std::string& title, const std::function<void(Outcome&)>& body) {
    Outcome o;
    try {
      body(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " exception: " << e.what();
    }
    results[k] = o.pass;
    all = all && o.pass;
    std::cout << "AC" << k << " " << (o.pass ? "PASS" : "FAIL") << " " << title << ": " << o.detail.str()
              << o.failures.str() << std::endl;
  };

  report(1, "regular 8-gon rank 6", [&](Outcome& o) { ac1(o, out); });
  report(2, "15-gon has 4 folding axes, rank 8", ac2);
  report(3, "rank 2*ceil(log2 n) with full and sampled verification", ac3);
  report(4, "permutahedron exact factorization", ac4);
  report(5, "lifts and per-facet projection LPs", ac5);
  report(6, "normalized-pair norm bound", ac6);
  report(7, "rounded-system lattice recovery", ac7);
  report(8, "lower bounds below construction rank", ac8);
  report(9, "existence-only bounds stated, covered by folding and recovery checks", [&](Outcome& o) {
    o.require(results[3] && results[7], "covering property checks");
    o.detail << "no numeric reproduction; relies on AC3 and AC7";
  });
  return all ? 0 : 1;
}
