#include "staterep/scenario.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "staterep/rng.hpp"

namespace staterep {

const StateSpec* Scenario::find_state(const std::string& id) const {
  for (const StateSpec& s : states) {
    if (s.state_id == id) return &s;
  }
  return nullptr;
}

void validate_scenario(const Scenario& s) {
  const int n = s.graph.node_count();
  std::set<std::string> ids;
  for (const StateSpec& st : s.states) {
    if (st.state_id.empty()) throw std::invalid_argument("state with empty id");
    if (!ids.insert(st.state_id).second) throw std::invalid_argument("duplicate state id '" + st.state_id + "'");
    if (st.max_replicas < 1) throw std::invalid_argument("state '" + st.state_id + "': max_replicas must be >= 1");
    if (st.sync_rate < 0) throw std::invalid_argument("state '" + st.state_id + "': sync_rate must be >= 0");
  }
  for (const FlowSpec& f : s.flows) {
    const std::string where = "flow " + std::to_string(f.flow_id);
    if (f.src < 0 || f.src >= n || f.dst < 0 || f.dst >= n)
      throw std::invalid_argument(where + ": endpoint out of range");
    if (f.src == f.dst) throw std::invalid_argument(where + ": src == dst");
    if (!(f.demand > 0)) throw std::invalid_argument(where + ": demand must be > 0");
    std::set<std::string> in_seq;
    for (const std::string& sid : f.state_sequence) {
      if (!ids.count(sid)) throw std::invalid_argument(where + ": undeclared state '" + sid + "'");
      if (!in_seq.insert(sid).second) throw std::invalid_argument(where + ": duplicate state '" + sid + "'");
    }
  }
}

NetworkGraph gen_manhattan(int rows, int cols, double capacity) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("grid dimensions must be >= 1");
  if (rows * cols < 2) throw std::invalid_argument("grid must have at least two nodes");
  std::vector<Link> links;
  links.reserve(static_cast<std::size_t>(2 * rows * cols));
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int id = r * cols + c;
      if (c + 1 < cols) links.push_back({id, id + 1, capacity});
      if (r + 1 < rows) links.push_back({id, id + cols, capacity});
    }
  }
  return NetworkGraph(rows * cols, std::move(links));
}

namespace {

// One Watts-Strogatz generation pass; may come out disconnected.
std::vector<Link> ws_links(int n, int k, double p, std::uint64_t seed, double capacity) {
  std::set<std::pair<int, int>> edge_set;
  auto norm = [](int a, int b) { return a < b ? std::pair{a, b} : std::pair{b, a}; };

  for (int i = 0; i < n; ++i) {
    for (int j = 1; j <= k / 2; ++j) edge_set.insert(norm(i, (i + j) % n));
  }

  SplitMix64 rng(seed);
  for (int i = 0; i < n; ++i) {
    if (!rng.next_bernoulli(p)) continue;
    const int succ = (i + 1) % n;
    // Count rewiring targets: anything not i and not already adjacent.
    int candidates = 0;
    for (int v = 0; v < n; ++v) {
      if (v != i && !edge_set.count(norm(i, v))) ++candidates;
    }
    if (candidates == 0) continue;  // node saturated, keep the ring edge
    int target;
    do {
      target = rng.next_index(n);
    } while (target == i || edge_set.count(norm(i, target)));
    edge_set.erase(norm(i, succ));
    edge_set.insert(norm(i, target));
  }

  std::vector<Link> links;
  links.reserve(edge_set.size());
  for (const auto& [u, v] : edge_set) links.push_back({u, v, capacity});
  return links;
}

bool links_connected(int n, const std::vector<Link>& links) {
  std::vector<std::vector<int>> adj(n);
  for (const Link& l : links) {
    adj[l.u].push_back(l.v);
    adj[l.v].push_back(l.u);
  }
  std::vector<char> reached(n, 0);
  std::vector<int> stack{0};
  reached[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v : adj[u]) {
      if (!reached[v]) {
        reached[v] = 1;
        ++count;
        stack.push_back(v);
      }
    }
  }
  return count == n;
}

}  // namespace

NetworkGraph gen_watts_strogatz(int n, int k, double p, std::uint64_t rng_seed, int* attempts_used,
                                double capacity) {
  if (k < 2 || k % 2 != 0) throw std::invalid_argument("k must be even and >= 2");
  if (n <= k) throw std::invalid_argument("n must exceed k");
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("p must be in [0, 1]");

  constexpr int kMaxAttempts = 1000;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const std::uint64_t seed = attempt == 0 ? rng_seed : derive_seed(rng_seed, static_cast<std::uint64_t>(attempt));
    std::vector<Link> links = ws_links(n, k, p, seed, capacity);
    if (links_connected(n, links)) {
      if (attempts_used) *attempts_used = attempt + 1;
      return NetworkGraph(n, std::move(links));
    }
  }
  throw std::runtime_error("watts-strogatz: no connected graph within retry budget");
}

namespace {

// Uniformly random fixed-point-free permutation of 0..n-1 by rejection:
// Fisher-Yates draws until no position maps to itself.
std::vector<int> random_derangement(int n, SplitMix64& rng) {
  std::vector<int> perm(n);
  for (;;) {
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int i = n - 1; i > 0; --i) {
      const int j = rng.next_index(i + 1);
      std::swap(perm[i], perm[j]);
    }
    bool fixed_point = false;
    for (int i = 0; i < n; ++i) {
      if (perm[i] == i) {
        fixed_point = true;
        break;
      }
    }
    if (!fixed_point) return perm;
  }
}

}  // namespace

std::vector<FlowSpec> gen_uniform_traffic(const NetworkGraph& g, double demand,
                                          const std::vector<std::string>& state_sequence,
                                          std::uint64_t rng_seed) {
  const int n = g.node_count();
  if (n < 2) throw std::invalid_argument("uniform traffic needs at least two nodes");
  SplitMix64 rng(rng_seed);
  const std::vector<int> perm = random_derangement(n, rng);
  std::vector<FlowSpec> flows(n);
  for (int i = 0; i < n; ++i) flows[i] = {i, i, perm[i], demand, state_sequence};
  return flows;
}

std::vector<FlowSpec> gen_clustered_traffic(const NetworkGraph& g, double demand,
                                            const std::vector<std::string>& state_sequence,
                                            std::uint64_t rng_seed) {
  const int n = g.node_count();
  if (n < 4) throw std::invalid_argument("clustered traffic needs at least four nodes");
  SplitMix64 rng(rng_seed);
  const int half = n / 2;  // larger half is [half, n) when n is odd
  const std::vector<int> low = random_derangement(half, rng);
  const std::vector<int> high = random_derangement(n - half, rng);
  std::vector<FlowSpec> flows(n);
  for (int i = 0; i < half; ++i) flows[i] = {i, i, low[i], demand, state_sequence};
  for (int i = 0; i < n - half; ++i) flows[half + i] = {half + i, half + i, half + high[i], demand, state_sequence};
  return flows;
}

}  // namespace staterep
