#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "properties.hpp"

using namespace staterep;
using namespace staterep::testing;

namespace {

Scenario star_scenario(double sync_rate, int max_replicas = 2) {
  Scenario s{NetworkGraph(4, {{0, 1, kUnboundedCapacity}, {0, 2, kUnboundedCapacity}, {0, 3, kUnboundedCapacity}}),
             {},
             {},
             {}};
  s.states.push_back({"s", max_replicas, sync_rate});
  s.flows.push_back({0, 1, 2, 1.0, {"s"}});
  s.flows.push_back({1, 2, 3, 1.0, {"s"}});
  s.flows.push_back({2, 3, 1, 1.0, {"s"}});
  return s;
}

Scenario grid_scenario(int rows, int cols, double sync_rate, int max_replicas,
                       std::uint64_t seed) {
  Scenario s{gen_manhattan(rows, cols), {}, {}, {}};
  s.states.push_back({"s", max_replicas, sync_rate});
  s.flows = gen_uniform_traffic(s.graph, 1.0, {"s"}, seed);
  return s;
}

}  // namespace

TEST_CASE("single replica lands on the grid center") {
  const Scenario s = grid_scenario(3, 3, 0.5, 1, 4);
  PmrConfig cfg;
  cfg.local_search_iters = 0;  // phase 1/2 only
  const PmrResult result = place_multi_replicas(s, "s", 1, cfg);
  CHECK(result.placement.replicas.at("s") == std::vector<int>{4});
  CHECK(result.distinct_count == 1);
  CHECK(result.iterations_improved == 0);
}

TEST_CASE("zero iterations return the phase-1/2 placement unchanged") {
  const Scenario s = grid_scenario(3, 3, 1.0, 3, 9);
  PmrConfig cfg;
  cfg.local_search_iters = 0;
  cfg.rng_seed = 5;
  const PmrResult result = place_multi_replicas(s, "s", 3, cfg);
  const PartitionResult partitions = [&] {
    SplitMix64 rng(cfg.rng_seed);
    return compute_partitions(s.graph, 3, cfg.partition_iters, rng.next());
  }();
  std::vector<int> expected;
  for (const std::vector<int>& cell : partitions.cells()) {
    expected.push_back(max_betweenness_node(s.graph, cell));
  }
  CHECK(result.placement.replicas.at("s") == expected);
}

TEST_CASE("search collapses both star replicas onto the hub") {
  const Scenario s = star_scenario(1.0, 2);
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    PmrConfig cfg;
    cfg.local_search_iters = 300;
    cfg.rng_seed = seed;
    const PmrResult result = place_multi_replicas(s, "s", 2, cfg);
    CHECK(result.report.objective_total == 6.0);
    CHECK(result.distinct_count == 1);  // phase 2 starts from 2 distinct hosts
  }
}

TEST_CASE("pmr rejects unsupported scenarios") {
  Scenario two_states = star_scenario(1.0);
  two_states.states.push_back({"t", 1, 0.0});
  CHECK_THROWS_WITH_AS(place_multi_replicas(two_states, "s", 1, {}),
                       "PMR supports a single state", std::invalid_argument);
  const Scenario s = star_scenario(1.0);
  CHECK_THROWS_AS(place_multi_replicas(s, "s", 5, {}), std::invalid_argument);
}

TEST_CASE("route_flows matches the evaluator") {
  SUBCASE("tie between on-path replicas picks the lowest id") {
    Scenario s{NetworkGraph(3, {{0, 1, kUnboundedCapacity}, {1, 2, kUnboundedCapacity}}), {}, {}, {}};
    s.states.push_back({"s", 2, 0.0});
    s.flows.push_back({0, 0, 2, 1.0, {"s"}});
    Placement placement;
    placement.replicas["s"] = {0, 1};
    const RouteFlowsResult routed = route_flows(s, placement);
    CHECK(routed.objective == 2.0);
    CHECK(routed.solution.flows[0].replica_choice == std::vector<int>{0});
  }
  SUBCASE("single replica objective is the two-leg distance sum") {
    SplitMix64 rng(17);
    for (int i = 0; i < 30; ++i) {
      const Scenario s = random_pmr_scenario(rng);
      if (s.flows.empty()) continue;
      Placement placement;
      const int r = rng.next_index(s.graph.node_count());
      placement.replicas[s.states[0].state_id] = {r};
      const DistanceTables dt = all_pairs_shortest_paths(s.graph);
      double expected = 0.0;
      for (const FlowSpec& flow : s.flows) {
        const int through = flow.state_sequence.empty()
                                ? dt.distance(flow.src, flow.dst)
                                : dt.distance(flow.src, r) + dt.distance(r, flow.dst);
        expected += flow.demand * through;
      }
      CHECK(route_flows(s, placement).objective == expected);
    }
  }
  SUBCASE("agreement with evaluate on random instances") {
    SplitMix64 rng(18);
    for (int i = 0; i < 100; ++i) {
      const Scenario s = random_pmr_scenario(rng);
      const Placement placement = random_placement(rng, s);
      const RouteFlowsResult routed = route_flows(s, placement);
      const EvalResult direct = evaluate(s, placement);
      CHECK(routed.objective == direct.report.objective_total);
      CHECK(routed.report.data_total == direct.report.data_total);
      CHECK(routed.report.edge_loads == direct.report.edge_loads);
    }
  }
}

TEST_CASE("perturbation moves one replica one hop") {
  SUBCASE("hub replica spreads over the leaves roughly uniformly") {
    const Scenario s = star_scenario(1.0, 1);
    Placement placement;
    placement.replicas["s"] = {0};
    std::map<int, int> counts;
    SplitMix64 rng(23);
    for (int i = 0; i < 3000; ++i) {
      const Placement moved = perturb_replica_location(placement, s.graph, rng);
      counts[moved.replicas.at("s")[0]] += 1;
    }
    CHECK(counts.size() == 3);
    for (const auto& [leaf, count] : counts) {
      CHECK(count > 800);
      CHECK(count < 1200);
    }
  }
  SUBCASE("coincident moves disabled on a path") {
    Scenario s{NetworkGraph(3, {{0, 1, kUnboundedCapacity}, {1, 2, kUnboundedCapacity}}), {}, {}, {}};
    s.states.push_back({"s", 2, 0.0});
    Placement placement;
    placement.replicas["s"] = {0, 2};
    SplitMix64 rng(29);
    for (int i = 0; i < 200; ++i) {
      const Placement moved = perturb_replica_location(placement, s.graph, rng, false);
      const std::vector<int>& hosts = moved.replicas.at("s");
      const bool left = hosts == std::vector<int>{1, 2};
      const bool right = hosts == std::vector<int>{0, 1};
      CHECK((left || right));
    }
  }
  CHECK(check_perturb_contract(200, 31).value_or("ok") == "ok");
}

TEST_CASE("pmr property suites") {
  const auto report = [](const CheckResult& r) { return r.value_or("ok"); };
  CHECK(report(check_pmr_anytime(60, 501)) == "ok");
  CHECK(report(check_pmr_vs_exact(40, 502)) == "ok");
}
