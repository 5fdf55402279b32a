// Property checks shared between the unit tests (small case counts) and
// the acceptance suite (>= 1000 cases each). Each check runs `cases`
// randomized trials and returns a description of the first failure, or
// nullopt when everything held.

#pragma once

#include <cmath>
#include <optional>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "test_util.hpp"

#include "staterep/asymptotic.hpp"
#include "staterep/exact_solver.hpp"
#include "staterep/experiment.hpp"
#include "staterep/pmr.hpp"

namespace staterep::testing {

using CheckResult = std::optional<std::string>;

inline CheckResult fail_msg(const std::string& msg) { return msg; }

// --- graph-core ---

inline CheckResult check_apsp_properties(int cases, std::uint64_t seed) {
  SplitMix64 rng(seed);
  for (int i = 0; i < cases; ++i) {
    const NetworkGraph g = random_connected_graph(rng, 10);
    const DistanceTables dt = all_pairs_shortest_paths(g);
    const int n = g.node_count();
    for (int a = 0; a < n; ++a) {
      if (dt.distance(a, a) != 0) return fail_msg("dist(a,a) != 0");
      for (int b = 0; b < n; ++b) {
        if (dt.distance(a, b) != dt.distance(b, a)) return fail_msg("asymmetric distances");
        if (static_cast<int>(dt.walk(a, b).size()) != dt.distance(a, b) + 1) {
          return fail_msg("next-hop walk length != dist");
        }
        for (int c = 0; c < n; ++c) {
          if (dt.distance(a, c) > dt.distance(a, b) + dt.distance(b, c)) {
            return fail_msg("triangle inequality violated");
          }
        }
      }
    }
  }
  return std::nullopt;
}

inline CheckResult check_betweenness_oracle(int cases, std::uint64_t seed) {
  SplitMix64 rng(seed);
  for (int i = 0; i < cases; ++i) {
    const NetworkGraph g = random_connected_graph(rng, 8);
    const std::vector<double> fast = betweenness_centrality(g);
    const std::vector<double> slow = oracle_betweenness(g);
    for (int v = 0; v < g.node_count(); ++v) {
      if (std::abs(fast[v] - slow[v]) > 1e-9) {
        std::ostringstream os;
        os << "betweenness mismatch at node " << v << ": " << fast[v] << " vs oracle " << slow[v];
        return fail_msg(os.str());
      }
    }
  }
  return std::nullopt;
}

inline CheckResult check_partition_properties(int cases, std::uint64_t seed) {
  SplitMix64 rng(seed);
  for (int i = 0; i < cases; ++i) {
    const NetworkGraph g = random_connected_graph(rng, 10);
    const int n = g.node_count();
    const int c = 1 + rng.next_index(n);
    const int max_iters = 1 + rng.next_index(20);
    const std::uint64_t run_seed = rng.next();
    const PartitionResult result = compute_partitions(g, c, max_iters, run_seed);
    const PartitionResult again = compute_partitions(g, c, max_iters, run_seed);
    if (result.affiliation != again.affiliation || result.centers != again.centers ||
        result.iterations_used != again.iterations_used) {
      return fail_msg("compute_partitions not deterministic");
    }
    if (result.iterations_used > max_iters) return fail_msg("iterations_used exceeds max_iters");
    if (static_cast<int>(result.centers.size()) != c) return fail_msg("wrong center count");
    const DistanceTables dt = all_pairs_shortest_paths(g);
    for (int node = 0; node < n; ++node) {
      const int assigned = result.affiliation[node];
      for (int center : result.centers) {
        const int da = dt.distance(node, assigned);
        const int dc = dt.distance(node, center);
        if (dc < da || (dc == da && center < assigned)) {
          return fail_msg("affiliation is not nearest-center with lowest-id ties");
        }
      }
    }
    for (std::size_t cell_idx = 0; cell_idx < result.centers.size(); ++cell_idx) {
      const std::vector<std::vector<int>> cells = result.cells();
      if (cells[cell_idx].empty()) return fail_msg("empty partition cell");
      const int center = result.centers[cell_idx];
      if (result.affiliation[center] != center) return fail_msg("center not affiliated to itself");
      if (result.iterations_used < max_iters &&
          max_betweenness_node(g, cells[cell_idx]) != center) {
        return fail_msg("converged center is not the max-betweenness node of its cell");
      }
    }
  }
  return std::nullopt;
}

// --- scenario-gen ---

inline CheckResult check_generator_determinism(int cases, std::uint64_t seed) {
  SplitMix64 rng(seed);
  for (int i = 0; i < cases; ++i) {
    const int n = 6 + rng.next_index(40);
    const int k = 2 + 2 * rng.next_index(std::max(1, (n - 2) / 2 < 4 ? (n - 2) / 2 : 4));
    const double p = rng.next_double();
    const std::uint64_t s = rng.next();
    if (n > k) {
      int attempts_a = 0, attempts_b = 0;
      const NetworkGraph a = gen_watts_strogatz(n, k, p, s, &attempts_a);
      const NetworkGraph b = gen_watts_strogatz(n, k, p, s, &attempts_b);
      if (!(a == b) || attempts_a != attempts_b) return fail_msg("watts-strogatz not deterministic");
      if (static_cast<int>(a.links().size()) != n * k / 2) {
        return fail_msg("watts-strogatz link count != n*k/2");
      }
    }
    const NetworkGraph g = random_connected_graph(rng, 12);
    for (const bool clustered : {false, true}) {
      if (clustered && g.node_count() < 4) continue;
      const auto gen = clustered ? gen_clustered_traffic : gen_uniform_traffic;
      const std::vector<FlowSpec> f1 = gen(g, 1.0, {"a"}, s);
      const std::vector<FlowSpec> f2 = gen(g, 1.0, {"a"}, s);
      if (f1 != f2) return fail_msg("traffic generator not deterministic");
      if (static_cast<int>(f1.size()) != g.node_count()) return fail_msg("|F| != N");
      std::vector<int> sources, destinations;
      for (const FlowSpec& flow : f1) {
        if (flow.src == flow.dst) return fail_msg("flow with src == dst");
        sources.push_back(flow.src);
        destinations.push_back(flow.dst);
      }
      std::sort(sources.begin(), sources.end());
      std::sort(destinations.begin(), destinations.end());
      for (int v = 0; v < g.node_count(); ++v) {
        if (sources[v] != v || destinations[v] != v) return fail_msg("not a permutation");
      }
      if (clustered) {
        const int half = g.node_count() / 2;
        for (const FlowSpec& flow : f1) {
          if ((flow.src < half) != (flow.dst < half)) return fail_msg("clustered flow crosses halves");
        }
      }
    }
  }
  return std::nullopt;
}

// --- evaluator ---

inline CheckResult check_dual_accumulation(int cases, std::uint64_t seed) {
  SplitMix64 rng(seed);
  for (int i = 0; i < cases; ++i) {
    const Scenario scenario = random_scenario(rng);
    const Placement placement = random_placement(rng, scenario);
    const EvalResult eval = evaluate(scenario, placement);
    double from_edges = 0.0;
    for (double load : eval.report.edge_loads) from_edges += load;
    if (from_edges != eval.report.objective_total) {
      std::ostringstream os;
      os.precision(17);
      os << "edge-load sum " << from_edges << " != objective " << eval.report.objective_total;
      return fail_msg(os.str());
    }
    if (eval.report.objective_total != eval.report.data_total + eval.report.sync_total) {
      return fail_msg("objective != data + sync");
    }
  }
  return std::nullopt;
}

inline CheckResult check_replica_monotonicity(int cases, std::uint64_t seed) {
  SplitMix64 rng(seed);
  for (int i = 0; i < cases; ++i) {
    const Scenario scenario = random_scenario(rng);
    if (scenario.flows.empty()) continue;
    Placement placement = random_placement(rng, scenario);
    const int state_idx = rng.next_index(static_cast<int>(scenario.states.size()));
    const std::string& state_id = scenario.states[state_idx].state_id;
    std::vector<int> free_nodes;
    const std::vector<int> hosts = placement.distinct_hosts(state_id);
    for (int v = 0; v < scenario.graph.node_count(); ++v) {
      if (std::find(hosts.begin(), hosts.end(), v) == hosts.end()) free_nodes.push_back(v);
    }
    if (free_nodes.empty()) continue;
    const EvalResult before = evaluate(scenario, placement);
    placement.replicas[state_id].push_back(free_nodes[rng.next_index(static_cast<int>(free_nodes.size()))]);
    const EvalResult after = evaluate(scenario, placement);
    if (after.report.data_total > before.report.data_total) {
      return fail_msg("adding a replica increased data_total");
    }
    if (after.report.sync_total < before.report.sync_total) {
      return fail_msg("adding a replica decreased sync_total");
    }
  }
  return std::nullopt;
}

inline CheckResult check_single_replica_formula(int cases, std::uint64_t seed) {
  SplitMix64 rng(seed);
  for (int i = 0; i < cases; ++i) {
    RandomScenarioOptions opt;
    opt.max_states = 1;
    opt.max_sequence = 1;
    opt.allow_empty_sequence = false;
    const Scenario scenario = random_scenario(rng, opt);
    if (scenario.flows.empty()) continue;
    const int r = rng.next_index(scenario.graph.node_count());
    Placement placement;
    placement.replicas[scenario.states[0].state_id] = {r};
    const DistanceTables dt = all_pairs_shortest_paths(scenario.graph);
    for (const FlowSpec& flow : scenario.flows) {
      const RoutedFlow routed = route_flow_sequence(flow, placement, dt);
      if (routed.hop_length != dt.distance(flow.src, r) + dt.distance(r, flow.dst)) {
        return fail_msg("single-replica hop length != dist(s,r)+dist(r,d)");
      }
    }
  }
  return std::nullopt;
}

inline CheckResult check_objective_linearity(int cases, std::uint64_t seed) {
  SplitMix64 rng(seed);
  for (int i = 0; i < cases; ++i) {
    Scenario scenario = random_scenario(rng);
    const Placement placement = random_placement(rng, scenario);
    const double base = evaluate(scenario, placement).report.objective_total;
    for (FlowSpec& flow : scenario.flows) flow.demand *= 2.0;
    for (StateSpec& state : scenario.states) state.sync_rate *= 2.0;
    const double scaled = evaluate(scenario, placement).report.objective_total;
    if (scaled != 2.0 * base) return fail_msg("objective not linear in rates");
  }
  return std::nullopt;
}

inline CheckResult check_route_optimality_vs_walks(int cases, std::uint64_t seed) {
  SplitMix64 rng(seed);
  constexpr int kMaxWalk = 8;
  for (int i = 0; i < cases; ++i) {
    const Scenario scenario = random_scenario(rng);
    const Placement placement = random_placement(rng, scenario);
    const DistanceTables dt = all_pairs_shortest_paths(scenario.graph);
    for (const FlowSpec& flow : scenario.flows) {
      const RoutedFlow routed = route_flow_sequence(flow, placement, dt);
      const std::optional<int> oracle = oracle_min_walk(scenario.graph, flow, placement, kMaxWalk);
      if (oracle.has_value()) {
        if (*oracle != routed.hop_length) {
          std::ostringstream os;
          os << "walk oracle found " << *oracle << ", router returned " << routed.hop_length;
          return fail_msg(os.str());
        }
      } else if (routed.hop_length <= kMaxWalk) {
        return fail_msg("router found a short walk the oracle missed");
      }
    }
  }
  return std::nullopt;
}

// --- exact solver ---

inline CheckResult check_exact_vs_oracle(int cases, std::uint64_t seed) {
  SplitMix64 rng(seed);
  for (int i = 0; i < cases; ++i) {
    const Scenario scenario = random_scenario(rng);
    std::map<std::string, int> caps;
    for (const StateSpec& state : scenario.states) {
      caps[state.state_id] = std::min({2, state.max_replicas, scenario.graph.node_count()});
    }
    const ExactResult solved = solve_exact(scenario, caps);
    const double oracle = oracle_exact_objective(scenario, caps);
    if (solved.best_report.objective_total != oracle) {
      std::ostringstream os;
      os.precision(17);
      os << "solve_exact " << solved.best_report.objective_total << " != oracle " << oracle;
      return fail_msg(os.str());
    }
  }
  return std::nullopt;
}

inline CheckResult check_exact_cap_monotonicity(int cases, std::uint64_t seed) {
  SplitMix64 rng(seed);
  for (int i = 0; i < cases; ++i) {
    RandomScenarioOptions opt;
    opt.max_states = 1;
    opt.max_replicas = 3;
    Scenario scenario = random_scenario(rng, opt);
    scenario.states[0].max_replicas = 3;
    double previous = std::numeric_limits<double>::infinity();
    for (int cap = 1; cap <= std::min(3, scenario.graph.node_count()); ++cap) {
      const double objective = solve_exact(scenario, cap).best_report.objective_total;
      if (objective > previous) return fail_msg("objective increased with larger cap");
      previous = objective;
    }
  }
  return std::nullopt;
}

inline CheckResult check_single_replica_baseline(int cases, std::uint64_t seed) {
  SplitMix64 rng(seed);
  for (int i = 0; i < cases; ++i) {
    RandomScenarioOptions opt;
    opt.max_states = 1;
    Scenario scenario = random_scenario(rng, opt);
    const double with_rate = solve_exact(scenario, 1).best_report.objective_total;
    Scenario zeroed = scenario;
    zeroed.states[0].sync_rate = 0.0;
    const double without_rate = solve_exact(zeroed, 1).best_report.objective_total;
    if (with_rate != without_rate) return fail_msg("cap-1 objective depends on sync rate");
  }
  return std::nullopt;
}

// --- pmr ---

inline Scenario random_pmr_scenario(SplitMix64& rng) {
  RandomScenarioOptions opt;
  opt.max_nodes = 12;
  opt.max_states = 1;
  opt.max_replicas = 4;
  opt.max_sequence = 1;
  opt.allow_empty_sequence = false;
  return random_scenario(rng, opt);
}

inline CheckResult check_pmr_anytime(int cases, std::uint64_t seed) {
  SplitMix64 rng(seed);
  for (int i = 0; i < cases; ++i) {
    const Scenario scenario = random_pmr_scenario(rng);
    if (scenario.flows.empty()) continue;
    PmrConfig cfg;
    cfg.local_search_iters = 30 + rng.next_index(40);
    cfg.rng_seed = rng.next();
    cfg.record_trace = true;
    const int budget = 1 + rng.next_index(std::min(4, scenario.graph.node_count()));
    const PmrResult result = place_multi_replicas(scenario, scenario.states[0].state_id, budget, cfg);
    if (result.trace.empty()) return fail_msg("missing trace");
    for (std::size_t t = 1; t < result.trace.size(); ++t) {
      if (result.trace[t].second > result.trace[t - 1].second) {
        return fail_msg("incumbent objective increased");
      }
    }
    // trace[0] is the phase-1/2 placement's objective.
    if (result.report.objective_total > result.trace.front().second) {
      return fail_msg("final objective worse than phase-1/2 objective");
    }
    if (result.report.objective_total != result.trace.back().second) {
      return fail_msg("returned report does not match the final incumbent");
    }
    if (result.distinct_count > budget) return fail_msg("distinct count exceeds budget");
  }
  return std::nullopt;
}

inline CheckResult check_pmr_vs_exact(int cases, std::uint64_t seed) {
  SplitMix64 rng(seed);
  for (int i = 0; i < cases; ++i) {
    const Scenario scenario = random_pmr_scenario(rng);
    if (scenario.flows.empty()) continue;
    const int budget = std::min({2, scenario.states[0].max_replicas, scenario.graph.node_count()});
    PmrConfig cfg;
    cfg.local_search_iters = 60;
    cfg.rng_seed = rng.next();
    const PmrResult pmr = place_multi_replicas(scenario, scenario.states[0].state_id, budget, cfg);
    const PmrResult pmr_again = place_multi_replicas(scenario, scenario.states[0].state_id, budget, cfg);
    if (!(pmr.placement == pmr_again.placement) ||
        pmr.report.objective_total != pmr_again.report.objective_total) {
      return fail_msg("pmr not deterministic");
    }
    const ExactResult exact = solve_exact(scenario, budget);
    if (pmr.report.objective_total < exact.best_report.objective_total - 1e-12) {
      return fail_msg("pmr beat the exact optimum");
    }
  }
  return std::nullopt;
}

inline CheckResult check_perturb_contract(int cases, std::uint64_t seed) {
  SplitMix64 rng(seed);
  for (int i = 0; i < cases; ++i) {
    const Scenario scenario = random_pmr_scenario(rng);
    const Placement placement = random_placement(rng, scenario);
    const bool allow = rng.next_bernoulli(0.5);
    Placement moved = perturb_replica_location(placement, scenario.graph, rng, allow);
    int changed = 0;
    for (const auto& [state_id, hosts] : placement.replicas) {
      const std::vector<int>& after = moved.replicas.at(state_id);
      if (hosts.size() != after.size()) return fail_msg("replica list size changed");
      for (std::size_t j = 0; j < hosts.size(); ++j) {
        if (hosts[j] == after[j]) continue;
        ++changed;
        const std::vector<int>& nbrs = scenario.graph.neighbors(hosts[j]);
        if (std::find(nbrs.begin(), nbrs.end(), after[j]) == nbrs.end()) {
          return fail_msg("replica moved to a non-neighbor");
        }
        if (!allow) {
          for (const auto& [sid2, hs2] : placement.replicas) {
            for (std::size_t m = 0; m < hs2.size(); ++m) {
              if (sid2 == state_id && m == j) continue;
              if (hs2[m] == after[j]) return fail_msg("coincident move while disallowed");
            }
          }
        }
      }
    }
    if (changed > 1) return fail_msg("more than one replica moved");
  }
  return std::nullopt;
}

// --- asymptotic ---

inline CheckResult check_beta_argmin_invariance(int cases, std::uint64_t seed) {
  SplitMix64 rng(seed);
  DistanceCache cache;
  constexpr long long kSamples = 20000;
  for (int i = 0; i < cases; ++i) {
    const int n = 4 + rng.next_index(2000);
    const int c_max = 1 + rng.next_index(12);
    const double lambda_f = dyadic(rng);
    const double lambda_s = rng.next_bernoulli(0.2) ? 0.0 : dyadic(rng);
    const double beta = 0.1 + rng.next_double() * (std::sqrt(2.0) - 0.1);
    int best_unit = 0, best_scaled = 0;
    double traffic_unit = std::numeric_limits<double>::infinity();
    double traffic_scaled = std::numeric_limits<double>::infinity();
    for (int c = 1; c <= c_max; ++c) {
      const UnitSquareModel& m = cache.get(c, kSamples, 77);
      const double t1 = total_traffic(n, c, lambda_f, lambda_s, 1.0, m.d_data, m.d_sync);
      const double tb = total_traffic(n, c, lambda_f, lambda_s, beta, m.d_data, m.d_sync);
      if (t1 < traffic_unit) {
        traffic_unit = t1;
        best_unit = c;
      }
      if (tb < traffic_scaled) {
        traffic_scaled = tb;
        best_scaled = c;
      }
    }
    if (best_unit != best_scaled) return fail_msg("argmin depends on beta");
    const int via_search = optimal_replicas_search(n, lambda_f, lambda_s, c_max, kSamples, 77, cache);
    if (via_search != best_unit) return fail_msg("optimal_replicas_search disagrees with direct scan");
  }
  return std::nullopt;
}

inline CheckResult check_grid_embedding_bounds(int cases, std::uint64_t seed) {
  SplitMix64 rng(seed);
  for (int i = 0; i < cases; ++i) {
    const int side = 2 + rng.next_index(15);
    const NetworkGraph g = gen_manhattan(side, side);
    const DistanceTables dt = all_pairs_shortest_paths(g);
    const double root_n = side;  // N = side^2
    for (int trial = 0; trial < 20; ++trial) {
      const int a = rng.next_index(side * side);
      const int b = rng.next_index(side * side);
      const double ax = (a % side + 0.5) / side, ay = (a / side + 0.5) / side;
      const double bx = (b % side + 0.5) / side, by = (b / side + 0.5) / side;
      const double d = std::sqrt((ax - bx) * (ax - bx) + (ay - by) * (ay - by));
      const int h = dt.distance(a, b);
      if (h + 1e-9 < d * root_n || h - 1e-9 > d * std::sqrt(2.0) * root_n) {
        return fail_msg("hop count outside the embedding distance bounds");
      }
    }
  }
  return std::nullopt;
}

// --- experiments ---

inline CheckResult check_csv_row_identity(const std::vector<ResultRow>& rows) {
  for (const ResultRow& row : rows) {
    if (row.status != "ok") continue;
    if (row.objective != row.data_total + row.sync_total) {
      return fail_msg("CSV row objective != data + sync");
    }
  }
  return std::nullopt;
}

}  // namespace staterep::testing
