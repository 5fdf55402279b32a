#include "staterep/evaluator.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <stdexcept>

namespace staterep {

std::vector<int> Placement::distinct_hosts(const std::string& state_id) const {
  const auto it = replicas.find(state_id);
  if (it == replicas.end()) return {};
  std::vector<int> hosts = it->second;
  std::sort(hosts.begin(), hosts.end());
  hosts.erase(std::unique(hosts.begin(), hosts.end()), hosts.end());
  return hosts;
}

int Placement::distinct_count(const std::string& state_id) const {
  return static_cast<int>(distinct_hosts(state_id).size());
}

int Placement::total_distinct() const {
  int total = 0;
  for (const auto& [state_id, hosts] : replicas) total += distinct_count(state_id);
  return total;
}

namespace {

constexpr int kUnreachable = std::numeric_limits<int>::max() / 4;

void append_walk(std::vector<int>& walk, const DistanceTables& dt, int from, int to) {
  int cur = from;
  while (cur != to) {
    cur = dt.next(cur, to);
    walk.push_back(cur);
  }
}

}  // namespace

RoutedFlow route_flow_sequence(const FlowSpec& flow, const Placement& placement,
                               const DistanceTables& dt) {
  const int layers = static_cast<int>(flow.state_sequence.size());

  std::vector<std::vector<int>> hosts(layers);
  for (int i = 0; i < layers; ++i) {
    hosts[i] = placement.distinct_hosts(flow.state_sequence[i]);
    if (hosts[i].empty()) {
      throw std::runtime_error("unplaced state '" + flow.state_sequence[i] + "' for flow " +
                               std::to_string(flow.flow_id));
    }
  }

  RoutedFlow routed;
  routed.flow_id = flow.flow_id;

  if (layers == 0) {
    routed.hop_length = dt.distance(flow.src, flow.dst);
    routed.walk = dt.walk(flow.src, flow.dst);
    return routed;
  }

  // suffix[i][j]: cheapest hops from hosts[i][j] through layers i+1.. to dst.
  std::vector<std::vector<int>> suffix(layers);
  suffix[layers - 1].resize(hosts[layers - 1].size());
  for (std::size_t j = 0; j < hosts[layers - 1].size(); ++j) {
    suffix[layers - 1][j] = dt.distance(hosts[layers - 1][j], flow.dst);
  }
  for (int i = layers - 2; i >= 0; --i) {
    suffix[i].assign(hosts[i].size(), kUnreachable);
    for (std::size_t j = 0; j < hosts[i].size(); ++j) {
      for (std::size_t m = 0; m < hosts[i + 1].size(); ++m) {
        suffix[i][j] = std::min(suffix[i][j],
                                dt.distance(hosts[i][j], hosts[i + 1][m]) + suffix[i + 1][m]);
      }
    }
  }

  // Walk the layers forward, committing the lowest-id host that still
  // achieves the optimal total. Host lists are sorted, so the first match
  // per layer is the lexicographically smallest choice.
  int total = kUnreachable;
  for (std::size_t j = 0; j < hosts[0].size(); ++j) {
    total = std::min(total, dt.distance(flow.src, hosts[0][j]) + suffix[0][j]);
  }
  routed.hop_length = total;

  routed.replica_choice.reserve(layers);
  int at = flow.src;
  int spent = 0;
  for (int i = 0; i < layers; ++i) {
    for (std::size_t j = 0; j < hosts[i].size(); ++j) {
      if (spent + dt.distance(at, hosts[i][j]) + suffix[i][j] == total) {
        spent += dt.distance(at, hosts[i][j]);
        at = hosts[i][j];
        routed.replica_choice.push_back(at);
        break;
      }
    }
  }
  assert(static_cast<int>(routed.replica_choice.size()) == layers);

  routed.walk.push_back(flow.src);
  at = flow.src;
  for (int host : routed.replica_choice) {
    append_walk(routed.walk, dt, at, host);
    at = host;
  }
  append_walk(routed.walk, dt, at, flow.dst);
  assert(static_cast<int>(routed.walk.size()) == routed.hop_length + 1);
  return routed;
}

SyncTraffic sync_traffic(const std::vector<StateSpec>& states, const Placement& placement,
                         const DistanceTables& dt) {
  SyncTraffic out;
  for (const StateSpec& state : states) {
    if (!(state.sync_rate > 0)) continue;
    const std::vector<int> hosts = placement.distinct_hosts(state.state_id);
    for (int from : hosts) {
      for (int to : hosts) {
        if (from == to) continue;
        out.total += state.sync_rate * dt.distance(from, to);
        out.paths.push_back({state.state_id, from, to, dt.walk(from, to)});
      }
    }
  }
  return out;
}

EvalResult evaluate(const Scenario& scenario, const Placement& placement,
                    const DistanceTables& dt) {
  EvalResult result;
  TrafficReport& report = result.report;
  report.edge_loads.assign(scenario.graph.edges().size(), 0.0);

  auto add_load = [&](const std::vector<int>& walk, double rate) {
    for (std::size_t i = 1; i < walk.size(); ++i) {
      const int e = scenario.graph.edge_index(walk[i - 1], walk[i]);
      assert(e >= 0);
      report.edge_loads[e] += rate;
    }
  };

  for (const FlowSpec& flow : scenario.flows) {
    RoutedFlow routed = route_flow_sequence(flow, placement, dt);
    report.data_total += flow.demand * routed.hop_length;
    add_load(routed.walk, flow.demand);
    result.solution.flows.push_back(std::move(routed));
  }

  SyncTraffic sync = sync_traffic(scenario.states, placement, dt);
  report.sync_total = sync.total;
  for (const SyncPath& sp : sync.paths) {
    const StateSpec* state = scenario.find_state(sp.state_id);
    add_load(sp.path, state->sync_rate);
  }
  result.solution.sync_paths = std::move(sync.paths);

  report.objective_total = report.data_total + report.sync_total;
  for (std::size_t e = 0; e < report.edge_loads.size(); ++e) {
    report.max_link_load = std::max(report.max_link_load, report.edge_loads[e]);
    if (report.edge_loads[e] > scenario.graph.edges()[e].capacity) report.capacity_feasible = false;
  }
  return result;
}

EvalResult evaluate(const Scenario& scenario, const Placement& placement) {
  return evaluate(scenario, placement, all_pairs_shortest_paths(scenario.graph));
}

double evaluate_objective(const Scenario& scenario, const Placement& placement,
                          const DistanceTables& dt) {
  // Distinct host lists once per call; this runs inside search loops.
  std::map<std::string, std::vector<int>> distinct;
  for (const auto& [state_id, hosts] : placement.replicas) distinct[state_id] = placement.distinct_hosts(state_id);
  auto hosts_of = [&](const std::string& state_id, int flow_id) -> const std::vector<int>& {
    const auto it = distinct.find(state_id);
    if (it == distinct.end() || it->second.empty()) {
      throw std::runtime_error("unplaced state '" + state_id + "' for flow " + std::to_string(flow_id));
    }
    return it->second;
  };

  double data_total = 0.0;
  std::vector<int> cost, next_cost;
  for (const FlowSpec& flow : scenario.flows) {
    const int layers = static_cast<int>(flow.state_sequence.size());
    if (layers == 0) {
      data_total += flow.demand * dt.distance(flow.src, flow.dst);
      continue;
    }
    // Same layered DP as route_flow_sequence, costs only.
    const std::vector<int>* prev_hosts = &hosts_of(flow.state_sequence[0], flow.flow_id);
    cost.resize(prev_hosts->size());
    for (std::size_t j = 0; j < prev_hosts->size(); ++j) cost[j] = dt.distance(flow.src, (*prev_hosts)[j]);
    for (int i = 1; i < layers; ++i) {
      const std::vector<int>& hosts = hosts_of(flow.state_sequence[i], flow.flow_id);
      next_cost.assign(hosts.size(), kUnreachable);
      for (std::size_t j = 0; j < hosts.size(); ++j) {
        for (std::size_t m = 0; m < prev_hosts->size(); ++m) {
          next_cost[j] = std::min(next_cost[j], cost[m] + dt.distance((*prev_hosts)[m], hosts[j]));
        }
      }
      cost = next_cost;
      prev_hosts = &hosts;
    }
    int best = kUnreachable;
    for (std::size_t j = 0; j < prev_hosts->size(); ++j) {
      best = std::min(best, cost[j] + dt.distance((*prev_hosts)[j], flow.dst));
    }
    data_total += flow.demand * best;
  }

  double sync_total = 0.0;
  for (const StateSpec& state : scenario.states) {
    if (!(state.sync_rate > 0)) continue;
    const auto it = distinct.find(state.state_id);
    if (it == distinct.end()) continue;
    for (int from : it->second) {
      for (int to : it->second) {
        if (from != to) sync_total += state.sync_rate * dt.distance(from, to);
      }
    }
  }
  return data_total + sync_total;
}

}  // namespace staterep
