#include <benchmark/benchmark.h>

#include "kout/analysis.hpp"
#include "kout/sampler.hpp"
#include "kout/theory.hpp"

namespace {

kout::ModelParams figure_params(std::int64_t n, std::int64_t k3) {
  kout::ModelParams p;
  p.n = n;
  p.dist.probs = {0.9, 0.06, 0.04};
  p.scaling.ks = {1, 2, k3};
  return p;
}

void BM_BuildGraph(benchmark::State& state) {
  const kout::ModelParams params = figure_params(state.range(0), 3);
  std::uint64_t trial = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kout::build_graph(params, {42, trial++}));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(0));
}
BENCHMARK(BM_BuildGraph)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_Census(benchmark::State& state) {
  const kout::ModelParams params = figure_params(state.range(0), 3);
  const kout::KOutGraph graph = kout::build_graph(params, {42, 0});
  for (auto _ : state) {
    benchmark::DoNotOptimize(kout::census(graph));
  }
}
BENCHMARK(BM_Census)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_UnionBound(benchmark::State& state) {
  const kout::ModelParams params = figure_params(state.range(0), 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kout::union_bound_disconnect(params));
  }
}
BENCHMARK(BM_UnionBound)->Arg(1000)->Arg(100000)->Arg(1000000);

}  // namespace

BENCHMARK_MAIN();
