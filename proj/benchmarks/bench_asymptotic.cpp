#include <benchmark/benchmark.h>

#include "staterep/asymptotic.hpp"

using namespace staterep;

static void BM_mc_distances_square(benchmark::State& state) {
  const int c = static_cast<int>(state.range(0));
  const long long samples = state.range(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mc_distances(c, samples, 1));
  }
  state.SetItemsProcessed(state.iterations() * samples);
}
BENCHMARK(BM_mc_distances_square)->Args({1, 100000})->Args({16, 100000})->Args({144, 100000});

static void BM_lloyd_positions(benchmark::State& state) {
  const int c = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(replica_positions(c));
  }
}
BENCHMARK(BM_lloyd_positions)->Arg(5)->Arg(12)->Arg(40)->Unit(benchmark::kMillisecond);

static void BM_replica_search(benchmark::State& state) {
  DistanceCache cache;
  const int n = static_cast<int>(state.range(0));
  // Warm the cache outside the timed region; the scan itself is the target.
  optimal_replicas_search(n, 1.0, 0.5, default_c_max(n), 50000, 1, cache);
  for (auto _ : state) {
    benchmark::DoNotOptimize(optimal_replicas_search(n, 1.0, 0.5, default_c_max(n), 50000, 1, cache));
  }
}
BENCHMARK(BM_replica_search)->Arg(64)->Arg(256);
