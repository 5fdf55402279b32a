// Independent test oracles. Everything here recomputes results through a
// different mechanism than the library (path enumeration instead of
// Brandes, raw walk enumeration instead of layered DP, bitmask subsets and
// replica tuples instead of the solver's recursion) so agreement is
// meaningful.

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "staterep/evaluator.hpp"
#include "staterep/scenario.hpp"

namespace staterep::testing {

// Betweenness by explicit enumeration of every shortest path per node pair
// (DFS over the BFS predecessor structure), endpoints excluded, unordered
// pairs counted once.
inline std::vector<double> oracle_betweenness(const NetworkGraph& g) {
  const int n = g.node_count();
  const DistanceTables dt = all_pairs_shortest_paths(g);
  std::vector<double> score(n, 0.0);

  for (int s = 0; s < n; ++s) {
    for (int t = s + 1; t < n; ++t) {
      std::vector<std::vector<int>> paths;
      std::vector<int> walk{s};
      // Enumerate all shortest s->t paths.
      auto dfs = [&](auto&& self, int at) -> void {
        if (at == t) {
          paths.push_back(walk);
          return;
        }
        for (int next : g.neighbors(at)) {
          if (dt.distance(next, t) + 1 == dt.distance(at, t)) {
            walk.push_back(next);
            self(self, next);
            walk.pop_back();
          }
        }
      };
      dfs(dfs, s);
      for (const std::vector<int>& path : paths) {
        for (std::size_t i = 1; i + 1 < path.size(); ++i) {
          score[path[i]] += 1.0 / static_cast<double>(paths.size());
        }
      }
    }
  }
  return score;
}

// Minimum length over all raw walks from flow.src to flow.dst of length
// <= max_len whose node sequence visits the flow's states in order
// (multiple states may be satisfied at one node). nullopt if none exists.
inline std::optional<int> oracle_min_walk(const NetworkGraph& g, const FlowSpec& flow,
                                          const Placement& placement, int max_len) {
  const int layers = static_cast<int>(flow.state_sequence.size());
  std::vector<std::set<int>> hosts(layers);
  for (int i = 0; i < layers; ++i) {
    const std::vector<int> distinct = placement.distinct_hosts(flow.state_sequence[i]);
    hosts[i] = std::set<int>(distinct.begin(), distinct.end());
  }

  int best = max_len + 1;
  auto advance = [&](int node, int progress) {
    while (progress < layers && hosts[progress].count(node)) ++progress;
    return progress;
  };
  auto dfs = [&](auto&& self, int at, int len, int progress) -> void {
    if (at == flow.dst && progress == layers) best = std::min(best, len);
    if (len >= best - 1 || len >= max_len) return;
    for (int next : g.neighbors(at)) {
      self(self, next, len + 1, advance(next, progress));
    }
  };
  dfs(dfs, flow.src, 0, advance(flow.src, 0));
  if (best > max_len) return std::nullopt;
  return best;
}

// Exact solver oracle: placements as bitmask subsets per state, per-flow
// costs by enumerating literal replica tuples (no layered DP), sync over
// ordered distinct host pairs. Returns the minimum objective.
inline double oracle_exact_objective(const Scenario& scenario,
                                     const std::map<std::string, int>& caps) {
  const int n = scenario.graph.node_count();
  const DistanceTables dt = all_pairs_shortest_paths(scenario.graph);
  const int state_count = static_cast<int>(scenario.states.size());

  std::vector<std::vector<std::vector<int>>> subsets(state_count);
  for (int i = 0; i < state_count; ++i) {
    const int cap = caps.at(scenario.states[i].state_id);
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      if (std::popcount(mask) > cap) continue;
      std::vector<int> hosts;
      for (int node = 0; node < n; ++node) {
        if (mask & (1u << node)) hosts.push_back(node);
      }
      subsets[i].push_back(std::move(hosts));
    }
  }

  auto flow_cost = [&](const FlowSpec& flow, const std::map<std::string, std::vector<int>>& hosts) {
    const int layers = static_cast<int>(flow.state_sequence.size());
    if (layers == 0) return static_cast<double>(dt.distance(flow.src, flow.dst));
    // Walk every replica tuple.
    std::vector<int> choice(layers, 0);
    int best = std::numeric_limits<int>::max();
    for (;;) {
      int cost = 0;
      int at = flow.src;
      for (int i = 0; i < layers; ++i) {
        const int host = hosts.at(flow.state_sequence[i])[choice[i]];
        cost += dt.distance(at, host);
        at = host;
      }
      cost += dt.distance(at, flow.dst);
      best = std::min(best, cost);
      int i = layers - 1;
      while (i >= 0 &&
             choice[i] + 1 == static_cast<int>(hosts.at(flow.state_sequence[i]).size())) {
        choice[i--] = 0;
      }
      if (i < 0) break;
      ++choice[i];
    }
    return static_cast<double>(best);
  };

  double best_objective = std::numeric_limits<double>::infinity();
  std::vector<int> pick(state_count, 0);
  for (;;) {
    std::map<std::string, std::vector<int>> hosts;
    for (int i = 0; i < state_count; ++i) {
      hosts[scenario.states[i].state_id] = subsets[i][pick[i]];
    }
    double objective = 0.0;
    for (const FlowSpec& flow : scenario.flows) objective += flow.demand * flow_cost(flow, hosts);
    for (const StateSpec& state : scenario.states) {
      if (!(state.sync_rate > 0)) continue;
      const std::vector<int>& hs = hosts.at(state.state_id);
      for (int a : hs) {
        for (int b : hs) {
          if (a != b) objective += state.sync_rate * dt.distance(a, b);
        }
      }
    }
    best_objective = std::min(best_objective, objective);

    int i = state_count - 1;
    while (i >= 0 && pick[i] + 1 == static_cast<int>(subsets[i].size())) pick[i--] = 0;
    if (i < 0) break;
    ++pick[i];
  }
  return best_objective;
}

// Closed forms for the unit-square model.
inline double closed_form_mean_dist_to_center() {
  return (std::sqrt(2.0) + std::log(1.0 + std::sqrt(2.0))) / 6.0;  // ~0.3826
}

inline double closed_form_d_sync_c4() { return (2.0 + std::sqrt(2.0)) / 6.0; }  // ~0.569036

inline constexpr double kMeanUniformPairDistance = 0.5214054331;

}  // namespace staterep::testing
