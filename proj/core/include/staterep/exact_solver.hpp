// Exhaustive placement enumeration for the uncapacitated problem. With
// unbounded capacities the objective decomposes per flow once the placement
// is fixed, so layered shortest-path routing is exact and enumerating
// distinct host subsets (coincident replicas collapse to fewer distinct
// hosts) covers every placement.

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "staterep/evaluator.hpp"

namespace staterep {

inline constexpr long long kDefaultPlacementBudget = 10'000'000;

struct BudgetExceeded : std::runtime_error {
  explicit BudgetExceeded(long long combinations, long long budget)
      : std::runtime_error("placement enumeration needs " + std::to_string(combinations) +
                           " combinations, budget is " + std::to_string(budget)),
        combinations(combinations) {}
  long long combinations;
};

struct ExactResult {
  Placement best_placement;
  TrafficReport best_report;
  RoutedSolution best_solution;
  std::map<std::string, int> optimal_distinct_counts;
  long long placements_examined = 0;
};

// Minimum-objective placement over all per-state host subsets of size
// 1..cap, jointly across states. Ties prefer fewer total distinct replicas,
// then the lexicographically smallest host sets (states in declaration
// order). Throws BudgetExceeded when the joint combination count is above
// `budget`.
ExactResult solve_exact(const Scenario& scenario,
                        const std::map<std::string, int>& distinct_cap_per_state,
                        long long budget = kDefaultPlacementBudget);

// Convenience: the same cap for every state, clamped to min(C_s, N).
ExactResult solve_exact(const Scenario& scenario, int distinct_cap,
                        long long budget = kDefaultPlacementBudget);

struct CurvePoint {
  double sync_rate = 0.0;
  double mean_distinct = 0.0;
  double mean_objective = 0.0;
  double mean_data = 0.0;
  double mean_sync = 0.0;
  double mean_single_replica_objective = 0.0;  // single-replica baseline
  int seeds = 0;
};

// Sweep the sync rate over seeded instances of a scenario family, solving
// each exactly; reports per-rate means plus the single-replica baseline.
std::vector<CurvePoint> optimal_replica_count_curve(
    const std::function<Scenario(std::uint64_t)>& family, const std::vector<double>& sync_rates,
    int seed_count, std::uint64_t base_seed, long long budget = kDefaultPlacementBudget);

}  // namespace staterep
