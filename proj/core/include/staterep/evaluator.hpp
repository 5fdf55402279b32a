// Solution semantics: routing a flow through its ordered state sequence,
// replica synchronization traffic, per-edge loads, the total-traffic
// objective and the capacity feasibility flag. Both solvers and every
// reported number go through this module.

#pragma once

#include <map>
#include <string>
#include <vector>

#include "staterep/scenario.hpp"

namespace staterep {

// Replica hosts per state. Host lists may repeat a node; coincident
// replicas behave as a single instance (they add no sync traffic).
struct Placement {
  std::map<std::string, std::vector<int>> replicas;

  std::vector<int> distinct_hosts(const std::string& state_id) const;  // sorted, unique
  int distinct_count(const std::string& state_id) const;
  int total_distinct() const;

  friend bool operator==(const Placement&, const Placement&) = default;
};

// One routed flow: the chosen replica per state of its sequence (in
// order), the node walk from src to dst, and its hop count. Walks may
// revisit nodes and edges; every traversal counts toward load.
struct RoutedFlow {
  int flow_id = 0;
  std::vector<int> replica_choice;
  std::vector<int> walk;
  int hop_length = 0;
};

struct SyncPath {
  std::string state_id;
  int from = 0;
  int to = 0;
  std::vector<int> path;
};

struct RoutedSolution {
  std::vector<RoutedFlow> flows;
  std::vector<SyncPath> sync_paths;
};

struct TrafficReport {
  double data_total = 0.0;
  double sync_total = 0.0;
  double objective_total = 0.0;  // data_total + sync_total
  double max_link_load = 0.0;
  std::vector<double> edge_loads;  // aligned with graph.edges()
  bool capacity_feasible = true;
};

// Hop-minimal walk src -> r_1 -> ... -> r_k -> dst over all choices of
// replica hosts r_i for the flow's state sequence, via layered DP on the
// distance tables. Ties pick the lowest host id layer by layer. A replica
// at src or dst counts as traversed. Throws on a state with no replica.
RoutedFlow route_flow_sequence(const FlowSpec& flow, const Placement& placement,
                               const DistanceTables& dt);

struct SyncTraffic {
  double total = 0.0;
  std::vector<SyncPath> paths;
};

// Shortest-path sync flows for every ordered pair of distinct replica
// hosts of every state with a positive sync rate. Coincident replicas
// contribute nothing.
SyncTraffic sync_traffic(const std::vector<StateSpec>& states, const Placement& placement,
                         const DistanceTables& dt);

struct EvalResult {
  RoutedSolution solution;
  TrafficReport report;
};

EvalResult evaluate(const Scenario& scenario, const Placement& placement, const DistanceTables& dt);
EvalResult evaluate(const Scenario& scenario, const Placement& placement);

// Objective only (no walks, no edge loads); exact same arithmetic as
// evaluate(). Used by search loops.
double evaluate_objective(const Scenario& scenario, const Placement& placement,
                          const DistanceTables& dt);

}  // namespace staterep
