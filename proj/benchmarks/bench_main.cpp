#include <benchmark/benchmark.h>

#include "polyfold/grid_rounding.hpp"
#include "polyfold/permutahedron_folding.hpp"
#include "polyfold/polygon_folding.hpp"

using namespace polyfold;

static void BM_PolygonFactorization(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto pf = build_polygon_factorization(n);
    benchmark::DoNotOptimize(pf.factorization.T.data().data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_PolygonFactorization)->RangeMultiplier(4)->Range(16, 4096)->Complexity();

static void BM_PolygonVerify(benchmark::State& state) {
  auto pf = build_polygon_factorization(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(verify_polygon_factorization(pf).pass);
}
BENCHMARK(BM_PolygonVerify)->RangeMultiplier(4)->Range(16, 4096);

static void BM_PermutahedronFactorization(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto pf = build_permutahedron_factorization(n);
    benchmark::DoNotOptimize(pf.rank());
  }
}
BENCHMARK(BM_PermutahedronFactorization)->DenseRange(3, 6)->Unit(benchmark::kMillisecond);

static void BM_MembershipTest(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto poly = make_grid_parabola_polygon(n, random_parabola_subset(n, 1));
  auto h = polygon_to_hrep(poly);
  auto pts = poly.vertex_points();
  auto f = trivial_factorization(slack_matrix(h, std::span<const Point<Rational>>(pts)));
  auto run = run_rounding_pipeline(poly, f, Integer(4 * n * n));
  std::vector<Rational> x{Rational(n), Rational(n * n)};
  for (auto _ : state) benchmark::DoNotOptimize(membership_test(run.system, x));
}
BENCHMARK(BM_MembershipTest)->DenseRange(3, 8)->Unit(benchmark::kMicrosecond);

static void BM_RoundingPipeline(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto poly = make_grid_parabola_polygon(n, random_parabola_subset(n, 1));
  auto h = polygon_to_hrep(poly);
  auto pts = poly.vertex_points();
  auto f = trivial_factorization(slack_matrix(h, std::span<const Point<Rational>>(pts)));
  for (auto _ : state) benchmark::DoNotOptimize(run_rounding_pipeline(poly, f, Integer(4 * n * n)).cramer_ok);
}
BENCHMARK(BM_RoundingPipeline)->DenseRange(3, 8)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
