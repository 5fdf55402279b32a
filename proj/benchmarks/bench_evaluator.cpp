#include <benchmark/benchmark.h>

#include "staterep/evaluator.hpp"
#include "staterep/scenario.hpp"

using namespace staterep;

namespace {

Scenario grid_scenario(int side, int replicas) {
  Scenario s{gen_manhattan(side, side), {}, {}, {}};
  s.states.push_back({"s", replicas, 0.5});
  s.flows = gen_uniform_traffic(s.graph, 1.0, {"s"}, 1);
  return s;
}

Placement spread_placement(const Scenario& s, int replicas) {
  Placement p;
  const int n = s.graph.node_count();
  for (int i = 0; i < replicas; ++i) p.replicas["s"].push_back((i * n) / replicas);
  return p;
}

}  // namespace

static void BM_evaluate_objective(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const int replicas = static_cast<int>(state.range(1));
  const Scenario s = grid_scenario(side, replicas);
  const Placement p = spread_placement(s, replicas);
  const DistanceTables dt = all_pairs_shortest_paths(s.graph);
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_objective(s, p, dt));
  }
}
BENCHMARK(BM_evaluate_objective)->Args({4, 2})->Args({7, 3})->Args({11, 8});

static void BM_evaluate_full(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const Scenario s = grid_scenario(side, 3);
  const Placement p = spread_placement(s, 3);
  const DistanceTables dt = all_pairs_shortest_paths(s.graph);
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate(s, p, dt));
  }
}
BENCHMARK(BM_evaluate_full)->Arg(4)->Arg(7)->Arg(11);
