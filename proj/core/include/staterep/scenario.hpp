// Problem instances: state variables, traffic flows, topology generators
// and the traffic models used in the experiments.

#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "staterep/graph.hpp"

namespace staterep {

inline constexpr double kUnboundedCapacity = std::numeric_limits<double>::infinity();

// One replicated state variable.
struct StateSpec {
  std::string state_id;
  int max_replicas = 1;    // upper bound on replica count
  double sync_rate = 0.0;  // traffic per ordered pair of distinct replicas

  friend bool operator==(const StateSpec&, const StateSpec&) = default;
};

// One traffic demand with the ordered states it must traverse.
struct FlowSpec {
  int flow_id = 0;
  int src = 0;
  int dst = 0;
  double demand = 1.0;
  std::vector<std::string> state_sequence;  // may be empty

  friend bool operator==(const FlowSpec&, const FlowSpec&) = default;
};

struct Scenario {
  NetworkGraph graph;
  std::vector<StateSpec> states;
  std::vector<FlowSpec> flows;
  std::map<std::string, std::string> meta;

  const StateSpec* find_state(const std::string& id) const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

// Throws std::invalid_argument on out-of-range endpoints, src == dst,
// non-positive demands, undeclared or duplicated states in a sequence,
// duplicate state ids, or invalid replica bounds / sync rates.
void validate_scenario(const Scenario& s);

// rows x cols grid, row-major ids, no wraparound; all links get `capacity`.
NetworkGraph gen_manhattan(int rows, int cols, double capacity = kUnboundedCapacity);

// Ring lattice of n nodes, each linked to its k nearest neighbors; then for
// every node, with probability p, the edge to its nearest clockwise
// neighbor is rewired to a uniformly random non-adjacent node. Disconnected
// outcomes are regenerated with a derived seed; attempts_used reports how
// many generations ran (1 = first try), for scenario metadata.
NetworkGraph gen_watts_strogatz(int n, int k, double p, std::uint64_t rng_seed,
                                int* attempts_used = nullptr,
                                double capacity = kUnboundedCapacity);

// N flows: destinations form a uniformly random fixed-point-free
// permutation of the nodes; all flows share `demand` and `state_sequence`.
std::vector<FlowSpec> gen_uniform_traffic(const NetworkGraph& g, double demand,
                                          const std::vector<std::string>& state_sequence,
                                          std::uint64_t rng_seed);

// Same, but nodes are split into halves [0, floor(N/2)) and [floor(N/2), N)
// and each half gets its own fixed-point-free permutation; no flow crosses
// the boundary.
std::vector<FlowSpec> gen_clustered_traffic(const NetworkGraph& g, double demand,
                                            const std::vector<std::string>& state_sequence,
                                            std::uint64_t rng_seed);

}  // namespace staterep
