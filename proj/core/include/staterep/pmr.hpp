// PlaceMultiReplicas: partition the graph, put one replica at the
// max-betweenness node of each partition, then improve by perturbation
// local search (move a random replica to a random neighbor, keep strict
// improvements, revert otherwise). Single-state scenarios only.

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "staterep/evaluator.hpp"
#include "staterep/rng.hpp"

namespace staterep {

struct PmrConfig {
  int local_search_iters = 1000;  // I
  int partition_iters = 10;       // I_p
  std::uint64_t rng_seed = 0;
  bool allow_coincident_moves = true;
  bool record_trace = false;  // (iteration, incumbent objective) pairs
};

struct PmrResult {
  Placement placement;
  TrafficReport report;
  RoutedSolution solution;
  int distinct_count = 0;
  int iterations_improved = 0;
  std::vector<std::pair<int, double>> trace;
};

PmrResult place_multi_replicas(const Scenario& scenario, const std::string& state_id,
                               int replica_budget, const PmrConfig& cfg);

struct RouteFlowsResult {
  double objective = 0.0;
  RoutedSolution solution;
  TrafficReport report;
};

// Routing for single-state placements: each flow goes through the replica
// minimizing dist(src, r) + dist(r, dst), lowest id on ties, plus
// ordered-pair sync flows. Identical to evaluate() on such scenarios.
RouteFlowsResult route_flows(const Scenario& scenario, const Placement& placement);

// Moves one uniformly random replica to a uniformly random neighbor of its
// host. With allow_coincident false, re-draws (bounded) when the target
// already hosts a replica, degrading to a no-op.
Placement perturb_replica_location(const Placement& placement, const NetworkGraph& g,
                                   SplitMix64& rng, bool allow_coincident = true);

}  // namespace staterep
