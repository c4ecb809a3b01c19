#include <benchmark/benchmark.h>

#include "fuzzyrand/adjust.hpp"
#include "fuzzyrand/dirichlet.hpp"
#include "fuzzyrand/expectation.hpp"
#include "fuzzyrand/indices.hpp"
#include "fuzzyrand/synth.hpp"

using namespace fuzzyrand;

namespace {

std::pair<MembershipMatrix, MembershipMatrix> pair_of(std::size_t points, std::size_t clusters) {
  FactorialParams p;
  p.n_clusters = clusters;
  p.n_points = points;
  p.imbalance = 0.6;
  p.precision = 1.0;
  p.randomize_rate = 0.6;
  p.seed = 1;
  return generate_pair(p);
}

void BM_RawIndex(benchmark::State& state) {
  const auto [a, b] = pair_of(static_cast<std::size_t>(state.range(0)), 8);
  for (auto _ : state) benchmark::DoNotOptimize(raw_index(a, b, IndexKind::kNdc));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_RawIndex)->RangeMultiplier(4)->Range(128, 8192)->Complexity(benchmark::oNSquared);

void BM_DirichletSample(benchmark::State& state) {
  const ModelDistribution d{DirichletParams::symmetric(static_cast<std::size_t>(state.range(0)), 0.5)};
  Xoshiro256pp rng(2);
  for (auto _ : state) benchmark::DoNotOptimize(sample(d, rng, 1024));
  state.SetItemsProcessed(state.iterations() * 1024);
}
BENCHMARK(BM_DirichletSample)->Arg(2)->Arg(8)->Arg(64);

void BM_TwoSided(benchmark::State& state) {
  McConfig cfg;
  cfg.samples = 100'000;
  const auto d1 = DirichletParams::flat(static_cast<std::size_t>(state.range(0)));
  const auto d2 = DirichletParams({0.5, 2.0, 1.0});
  for (auto _ : state) benchmark::DoNotOptimize(expected_conc_two_sided(d1, d2, IndexKind::kNdc, cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.samples));
}
BENCHMARK(BM_TwoSided)->Arg(2)->Arg(8);

void BM_OneSided(benchmark::State& state) {
  const auto [a, b] = pair_of(static_cast<std::size_t>(state.range(0)), 4);
  McConfig cfg;
  cfg.samples = 100'000;
  for (auto _ : state) {
    benchmark::DoNotOptimize(expected_conc_one_sided(DirichletParams::flat(4), b, IndexKind::kNdc, cfg));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.samples));
}
BENCHMARK(BM_OneSided)->Arg(128)->Arg(2048);

void BM_FitMle(benchmark::State& state) {
  Xoshiro256pp rng(3);
  const auto data = sample(DirichletParams({1.5, 0.7, 3.0, 2.2}), rng, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fit_mle(data, false));
}
BENCHMARK(BM_FitMle)->Arg(1000)->Arg(10000);

void BM_AdjustedToy(benchmark::State& state) {
  const auto toy = toy_allocations();
  const auto& a = toy.allocations[0].matrix;
  const auto& b = toy.allocations[2].matrix;
  McConfig cfg;
  cfg.samples = 100'000;
  for (auto _ : state) {
    benchmark::DoNotOptimize(adjusted_index(a, b, RandomModel{ModelFamily::kFit}, IndexKind::kNdc, cfg));
  }
}
BENCHMARK(BM_AdjustedToy);

}  // namespace
BENCHMARK_MAIN();
