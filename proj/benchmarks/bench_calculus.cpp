#include <benchmark/benchmark.h>

#include "stratcalc/fixtures.hpp"
#include "stratcalc/io.hpp"
#include "stratcalc/unbend.hpp"
#include "stratcalc/unfold.hpp"

using namespace stratcalc;

namespace {

/// Generated spaces of exactly length p, at most 12 strata.
const std::vector<fixtures::NamedSpace>& spaces_of_length(int p) {
  static std::map<int, std::vector<fixtures::NamedSpace>> cache;
  auto it = cache.find(p);
  if (it == cache.end()) it = cache.emplace(p, fixtures::generate_corpus(99 + p, 16, p, p, 12)).first;
  return it->second;
}

void BM_Present(benchmark::State& state) {
  auto e = StratSpaceExpr::cone(StratSpaceExpr::suspension(StratSpaceExpr::smooth("N", 1, true)));
  for (auto _ : state) benchmark::DoNotOptimize(present(e));
}
BENCHMARK(BM_Present);

void BM_Unbend(benchmark::State& state) {
  const auto& spaces = spaces_of_length(static_cast<int>(state.range(0)));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(unbend_space(spaces[i++ % spaces.size()].space));
}
BENCHMARK(BM_Unbend)->DenseRange(1, 4);

void BM_Unfold(benchmark::State& state) {
  const auto& spaces = spaces_of_length(static_cast<int>(state.range(0)));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(unfold_space(spaces[i++ % spaces.size()].space));
}
BENCHMARK(BM_Unfold)->DenseRange(1, 4);

void BM_IsoCheckReversed(benchmark::State& state) {
  const auto& spaces = spaces_of_length(static_cast<int>(state.range(0)));
  std::vector<std::pair<SpacePtr, SpacePtr>> pairs;
  for (const auto& s : spaces) {
    pairs.emplace_back(unbend_space(s.space).unbent, unbend_space(s.space, {true}).unbent);
  }
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& [a, b] = pairs[i++ % pairs.size()];
    benchmark::DoNotOptimize(iso_check(*a, *b));
  }
}
BENCHMARK(BM_IsoCheckReversed)->DenseRange(1, 4);

void BM_LiftRotation(benchmark::State& state) {
  auto cone = fixtures::cone_circle();
  auto f = fixtures::link_rotation(cone, StratumId::parse("v"), 3);
  auto u = unbend_space(cone);
  for (auto _ : state) benchmark::DoNotOptimize(lift_morphism(f, u, u, 1));
}
BENCHMARK(BM_LiftRotation);

void BM_ChartSquares(benchmark::State& state) {
  auto r = unbend_space(fixtures::cone_sigma());
  GridSpec grid = GridSpec::refined(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(check_chart_squares(r, grid));
}
BENCHMARK(BM_ChartSquares)->Arg(5)->Arg(10)->Arg(20);

void BM_FunctorHarness(benchmark::State& state) {
  auto b = fixtures::twisted_bundle();
  auto f = fixtures::bundle_twist(b);
  auto g = inverse_isomorphism(f);
  for (auto _ : state) benchmark::DoNotOptimize(functor_harness({{"bundle", b}}, {f, g}));
}
BENCHMARK(BM_FunctorHarness);

void BM_SerializeRoundTrip(benchmark::State& state) {
  auto x = fixtures::twisted_bundle();
  for (auto _ : state) benchmark::DoNotOptimize(io::parse_space(io::write_space(*x)));
}
BENCHMARK(BM_SerializeRoundTrip);

}  // namespace

BENCHMARK_MAIN();
