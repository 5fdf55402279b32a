#include <benchmark/benchmark.h>

#include "staterep/exact_solver.hpp"
#include "staterep/pmr.hpp"
#include "staterep/scenario.hpp"

using namespace staterep;

namespace {

Scenario grid_scenario(int side, int replicas) {
  Scenario s{gen_manhattan(side, side), {}, {}, {}};
  s.states.push_back({"s", replicas, 0.5});
  s.flows = gen_uniform_traffic(s.graph, 1.0, {"s"}, 1);
  return s;
}

}  // namespace

static void BM_pmr_full_run(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const int replicas = static_cast<int>(state.range(1));
  const Scenario s = grid_scenario(side, replicas);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    PmrConfig cfg;
    cfg.local_search_iters = 1000;
    cfg.rng_seed = seed++;
    benchmark::DoNotOptimize(place_multi_replicas(s, "s", replicas, cfg));
  }
}
BENCHMARK(BM_pmr_full_run)->Args({4, 3})->Args({7, 3})->Args({11, 8})->Unit(benchmark::kMillisecond);

static void BM_exact_solver(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const int cap = static_cast<int>(state.range(1));
  const Scenario s = grid_scenario(side, cap);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_exact(s, cap));
  }
}
BENCHMARK(BM_exact_solver)->Args({3, 2})->Args({4, 3})->Args({4, 7})->Unit(benchmark::kMillisecond);
