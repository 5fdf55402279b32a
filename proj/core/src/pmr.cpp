#include "staterep/pmr.hpp"

#include <limits>
#include <stdexcept>

namespace staterep {

PmrResult place_multi_replicas(const Scenario& scenario, const std::string& state_id,
                               int replica_budget, const PmrConfig& cfg) {
  if (scenario.states.size() != 1 || scenario.states[0].state_id != state_id) {
    throw std::invalid_argument("PMR supports a single state");
  }
  for (const FlowSpec& flow : scenario.flows) {
    if (flow.state_sequence.size() > 1) throw std::invalid_argument("PMR supports a single state");
  }
  const int n = scenario.graph.node_count();
  if (replica_budget < 1 || replica_budget > n) {
    throw std::invalid_argument("replica budget must be in [1, node count]");
  }
  if (cfg.local_search_iters < 0) throw std::invalid_argument("local_search_iters must be >= 0");
  if (cfg.partition_iters < 1) throw std::invalid_argument("partition_iters must be >= 1");

  const DistanceTables dt = all_pairs_shortest_paths(scenario.graph);
  SplitMix64 rng(cfg.rng_seed);
  const std::uint64_t partition_seed = rng.next();

  // Phase 1: partition; Phase 2: one replica per cell at its
  // max-betweenness node.
  const PartitionResult partitions =
      compute_partitions(scenario.graph, replica_budget, cfg.partition_iters, partition_seed);
  Placement current;
  std::vector<int>& hosts = current.replicas[state_id];
  for (const std::vector<int>& cell : partitions.cells()) {
    hosts.push_back(max_betweenness_node(scenario.graph, cell));
  }

  // Phase 3: each iteration evaluates the current placement, keeps it as
  // incumbent only on strict improvement (reverting otherwise), then
  // perturbs the incumbent. The trailing perturbation is never evaluated.
  PmrResult result;
  Placement incumbent = current;
  double best = std::numeric_limits<double>::infinity();
  for (int iter = 1; iter <= cfg.local_search_iters; ++iter) {
    const double objective = evaluate_objective(scenario, current, dt);
    if (objective < best) {
      best = objective;
      incumbent = current;
      ++result.iterations_improved;
    } else {
      current = incumbent;
    }
    if (cfg.record_trace) result.trace.emplace_back(iter, best);
    current = perturb_replica_location(current, scenario.graph, rng, cfg.allow_coincident_moves);
  }

  result.placement = std::move(incumbent);
  EvalResult eval = evaluate(scenario, result.placement, dt);
  result.report = std::move(eval.report);
  result.solution = std::move(eval.solution);
  result.distinct_count = result.placement.distinct_count(state_id);
  return result;
}

RouteFlowsResult route_flows(const Scenario& scenario, const Placement& placement) {
  if (placement.replicas.size() != 1) throw std::invalid_argument("route_flows expects a single state");
  if (placement.replicas.begin()->second.empty()) {
    throw std::invalid_argument("route_flows needs at least one replica");
  }
  for (const FlowSpec& flow : scenario.flows) {
    if (flow.state_sequence.size() > 1) throw std::invalid_argument("route_flows expects |S_f| <= 1");
  }
  EvalResult eval = evaluate(scenario, placement);
  return {eval.report.objective_total, std::move(eval.solution), std::move(eval.report)};
}

Placement perturb_replica_location(const Placement& placement, const NetworkGraph& g,
                                   SplitMix64& rng, bool allow_coincident) {
  // Replica index across states, in state-id order.
  std::vector<std::pair<const std::string*, int>> slots;
  for (const auto& [state_id, hosts] : placement.replicas) {
    for (int i = 0; i < static_cast<int>(hosts.size()); ++i) slots.emplace_back(&state_id, i);
  }
  if (slots.empty()) throw std::invalid_argument("perturb: placement has no replicas");

  constexpr int kMaxRetries = 32;
  Placement out = placement;
  for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
    const auto [state_id, slot] = slots[rng.next_index(static_cast<int>(slots.size()))];
    std::vector<int>& hosts = out.replicas[*state_id];
    const int host = hosts[slot];
    const std::vector<int>& nbrs = g.neighbors(host);
    const int target = nbrs[rng.next_index(static_cast<int>(nbrs.size()))];
    if (!allow_coincident) {
      bool occupied = false;
      for (const auto& [sid, hs] : out.replicas) {
        for (int h : hs) occupied = occupied || h == target;
      }
      if (occupied) continue;
    }
    hosts[slot] = target;
    return out;
  }
  return out;  // no admissible move found; keep the placement
}

}  // namespace staterep
