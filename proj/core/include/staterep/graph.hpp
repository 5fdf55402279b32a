// Network graph, hop-count shortest paths, betweenness centrality and
// Voronoi-style partitioning. All distances are hop counts (unit edge
// weights); every undirected link is stored as a pair of directed edges.

#pragma once

#include <cstdint>
#include <vector>

namespace staterep {

// Undirected link; expanded to two directed edges on construction.
struct Link {
  int u = 0;
  int v = 0;
  double capacity = 0.0;  // may be +infinity

  friend bool operator==(const Link&, const Link&) = default;
};

struct DirectedEdge {
  int u = 0;
  int v = 0;
  double capacity = 0.0;

  friend bool operator==(const DirectedEdge&, const DirectedEdge&) = default;
};

// Connected graph over nodes 0..N-1. Construction validates node ids,
// rejects self-loops and duplicate links, and rejects disconnected inputs.
class NetworkGraph {
 public:
  NetworkGraph(int node_count, std::vector<Link> links);

  int node_count() const { return node_count_; }
  const std::vector<Link>& links() const { return links_; }          // canonical u < v
  const std::vector<DirectedEdge>& edges() const { return edges_; }  // two per link
  const std::vector<int>& neighbors(int node) const { return adjacency_[node]; }
  int degree(int node) const { return static_cast<int>(adjacency_[node].size()); }

  // Index into edges() for directed pair (u, v); -1 if not adjacent.
  int edge_index(int u, int v) const;

  friend bool operator==(const NetworkGraph& a, const NetworkGraph& b) {
    return a.node_count_ == b.node_count_ && a.links_ == b.links_;
  }

 private:
  int node_count_;
  std::vector<Link> links_;
  std::vector<DirectedEdge> edges_;
  std::vector<std::vector<int>> adjacency_;  // sorted ascending
  std::vector<int> edge_lookup_;             // node_count^2 -> edge index or -1
};

// All-pairs hop distances plus first-hop table for path reconstruction.
// next(a, b) is the lowest-id neighbor of a that lies on a shortest a->b
// path, so walk(a, b) is the lexicographically smallest shortest walk.
struct DistanceTables {
  int n = 0;
  std::vector<int> dist;      // n*n row-major
  std::vector<int> next_hop;  // n*n row-major; next_hop[a][a] == a

  int distance(int a, int b) const { return dist[static_cast<std::size_t>(a) * n + b]; }
  int next(int a, int b) const { return next_hop[static_cast<std::size_t>(a) * n + b]; }

  // Node sequence a..b inclusive, following next-hop pointers.
  std::vector<int> walk(int a, int b) const;
};

DistanceTables all_pairs_shortest_paths(const NetworkGraph& g);

// Shortest-path betweenness on the undirected view, endpoints excluded
// (Brandes' accumulation; unordered pairs counted once).
std::vector<double> betweenness_centrality(const NetworkGraph& g);

// Betweenness restricted to the subgraph induced by `nodes` (must be
// non-empty; the induced subgraph need not be connected). Scores are
// returned aligned with `nodes`.
std::vector<double> betweenness_on_subset(const NetworkGraph& g, const std::vector<int>& nodes);

// Max-betweenness node of the induced subgraph, lowest id on ties.
int max_betweenness_node(const NetworkGraph& g, const std::vector<int>& nodes);

struct PartitionResult {
  std::vector<int> affiliation;  // node -> center node id
  std::vector<int> centers;      // distinct, ascending
  int iterations_used = 0;

  // Nodes grouped by center, in ascending center order; each cell sorted.
  std::vector<std::vector<int>> cells() const;
};

// Voronoi-style partitioning: seed `center_count` distinct random centers,
// then alternate {affiliate every node to the nearest center (ties to the
// lowest center id); re-center each cell on its max-betweenness node} until
// the center set recurs or `max_iters` rounds have run. The returned
// affiliation is always consistent with the returned centers.
PartitionResult compute_partitions(const NetworkGraph& g, int center_count, int max_iters,
                                   std::uint64_t rng_seed);

}  // namespace staterep
