#include <benchmark/benchmark.h>

#include "staterep/graph.hpp"
#include "staterep/scenario.hpp"

using namespace staterep;

static void BM_apsp_grid(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const NetworkGraph g = gen_manhattan(side, side);
  for (auto _ : state) {
    benchmark::DoNotOptimize(all_pairs_shortest_paths(g));
  }
  state.SetComplexityN(side * side);
}
BENCHMARK(BM_apsp_grid)->Arg(4)->Arg(8)->Arg(16)->Arg(32)->Complexity();

static void BM_betweenness_grid(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const NetworkGraph g = gen_manhattan(side, side);
  for (auto _ : state) {
    benchmark::DoNotOptimize(betweenness_centrality(g));
  }
}
BENCHMARK(BM_betweenness_grid)->Arg(4)->Arg(8)->Arg(16);

static void BM_partitions_grid(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const NetworkGraph g = gen_manhattan(side, side);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(compute_partitions(g, 4, 10, seed++));
  }
}
BENCHMARK(BM_partitions_grid)->Arg(7)->Arg(11);
