#include "staterep/exact_solver.hpp"

#include <algorithm>

namespace staterep {

namespace {

// Sum over c=1..cap of C(n, c), as double to sidestep overflow.
double subset_count(int n, int cap) {
  double total = 0.0;
  double binom = 1.0;
  for (int c = 1; c <= cap; ++c) {
    binom = binom * (n - c + 1) / c;
    total += binom;
  }
  return total;
}

// Enumerates all non-empty subsets of 0..n-1 of size <= cap, by size then
// lexicographically.
void for_each_subset(int n, int cap, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> subset;
  for (int size = 1; size <= cap; ++size) {
    subset.resize(size);
    for (int i = 0; i < size; ++i) subset[i] = i;
    for (;;) {
      fn(subset);
      int i = size - 1;
      while (i >= 0 && subset[i] == n - size + i) --i;
      if (i < 0) break;
      ++subset[i];
      for (int j = i + 1; j < size; ++j) subset[j] = subset[j - 1] + 1;
    }
  }
}

// Strict ordering on candidate optima: objective, then total distinct
// replicas, then host sets lexicographically in state declaration order.
// Order-independent, so any evaluation order yields the same minimum.
bool better_candidate(double obj_a, const std::vector<std::vector<int>>& a, double obj_b,
                      const std::vector<std::vector<int>>& b) {
  if (obj_a != obj_b) return obj_a < obj_b;
  std::size_t distinct_a = 0, distinct_b = 0;
  for (const auto& hosts : a) distinct_a += hosts.size();
  for (const auto& hosts : b) distinct_b += hosts.size();
  if (distinct_a != distinct_b) return distinct_a < distinct_b;
  return a < b;
}

}  // namespace

ExactResult solve_exact(const Scenario& scenario,
                        const std::map<std::string, int>& distinct_cap_per_state, long long budget) {
  const int n = scenario.graph.node_count();
  std::vector<int> caps;
  caps.reserve(scenario.states.size());
  for (const StateSpec& state : scenario.states) {
    const auto it = distinct_cap_per_state.find(state.state_id);
    if (it == distinct_cap_per_state.end()) {
      throw std::invalid_argument("no distinct cap for state '" + state.state_id + "'");
    }
    const int cap = it->second;
    if (cap < 1 || cap > std::min(state.max_replicas, n)) {
      throw std::invalid_argument("cap for state '" + state.state_id + "' must be in [1, min(" +
                                  std::to_string(state.max_replicas) + ", " + std::to_string(n) + ")]");
    }
    caps.push_back(cap);
  }

  double combinations = 1.0;
  for (int cap : caps) combinations *= subset_count(n, cap);
  if (combinations > static_cast<double>(budget)) {
    throw BudgetExceeded(static_cast<long long>(std::min(combinations, 9.0e18)), budget);
  }

  const DistanceTables dt = all_pairs_shortest_paths(scenario.graph);
  const int state_count = static_cast<int>(scenario.states.size());

  ExactResult result;
  std::vector<std::vector<int>> current(state_count), best;
  double best_objective = 0.0;
  bool have_best = false;

  std::function<void(int)> recurse = [&](int state_idx) {
    if (state_idx == state_count) {
      Placement placement;
      for (int i = 0; i < state_count; ++i) placement.replicas[scenario.states[i].state_id] = current[i];
      const double objective = evaluate_objective(scenario, placement, dt);
      ++result.placements_examined;
      if (!have_best || better_candidate(objective, current, best_objective, best)) {
        have_best = true;
        best_objective = objective;
        best = current;
      }
      return;
    }
    for_each_subset(n, caps[state_idx], [&](const std::vector<int>& subset) {
      current[state_idx] = subset;
      recurse(state_idx + 1);
    });
  };
  recurse(0);

  for (int i = 0; i < state_count; ++i) {
    result.best_placement.replicas[scenario.states[i].state_id] = best[i];
    result.optimal_distinct_counts[scenario.states[i].state_id] = static_cast<int>(best[i].size());
  }
  EvalResult eval = evaluate(scenario, result.best_placement, dt);
  result.best_report = std::move(eval.report);
  result.best_solution = std::move(eval.solution);
  return result;
}

ExactResult solve_exact(const Scenario& scenario, int distinct_cap, long long budget) {
  std::map<std::string, int> caps;
  for (const StateSpec& state : scenario.states) {
    caps[state.state_id] = std::min({distinct_cap, state.max_replicas, scenario.graph.node_count()});
  }
  return solve_exact(scenario, caps, budget);
}

std::vector<CurvePoint> optimal_replica_count_curve(
    const std::function<Scenario(std::uint64_t)>& family, const std::vector<double>& sync_rates,
    int seed_count, std::uint64_t base_seed, long long budget) {
  std::vector<CurvePoint> curve;
  curve.reserve(sync_rates.size());
  for (const double rate : sync_rates) {
    CurvePoint point;
    point.sync_rate = rate;
    point.seeds = seed_count;
    for (int i = 0; i < seed_count; ++i) {
      Scenario scenario = family(base_seed + static_cast<std::uint64_t>(i));
      for (StateSpec& state : scenario.states) state.sync_rate = rate;
      std::map<std::string, int> caps;
      for (const StateSpec& state : scenario.states) {
        caps[state.state_id] = std::min(state.max_replicas, scenario.graph.node_count());
      }
      const ExactResult solved = solve_exact(scenario, caps, budget);
      point.mean_objective += solved.best_report.objective_total;
      point.mean_data += solved.best_report.data_total;
      point.mean_sync += solved.best_report.sync_total;
      point.mean_distinct += solved.best_placement.total_distinct();

      const ExactResult single = solve_exact(scenario, 1, budget);
      point.mean_single_replica_objective += single.best_report.objective_total;
    }
    point.mean_objective /= seed_count;
    point.mean_data /= seed_count;
    point.mean_sync /= seed_count;
    point.mean_distinct /= seed_count;
    point.mean_single_replica_objective /= seed_count;
    curve.push_back(point);
  }
  return curve;
}

}  // namespace staterep
