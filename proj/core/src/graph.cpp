#include "staterep/graph.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

#include "staterep/rng.hpp"

namespace staterep {

namespace {

void check_node(int node, int n, const char* what) {
  if (node < 0 || node >= n) {
    throw std::invalid_argument(std::string(what) + " node id " + std::to_string(node) +
                                " out of range [0, " + std::to_string(n) + ")");
  }
}

}  // namespace

NetworkGraph::NetworkGraph(int node_count, std::vector<Link> links) : node_count_(node_count) {
  if (node_count < 1) throw std::invalid_argument("graph must have at least one node");

  std::set<std::pair<int, int>> seen;
  links_.reserve(links.size());
  for (Link link : links) {
    check_node(link.u, node_count, "link");
    check_node(link.v, node_count, "link");
    if (link.u == link.v) throw std::invalid_argument("self-loop at node " + std::to_string(link.u));
    if (link.u > link.v) std::swap(link.u, link.v);
    if (!seen.insert({link.u, link.v}).second) {
      throw std::invalid_argument("duplicate link " + std::to_string(link.u) + "-" + std::to_string(link.v));
    }
    links_.push_back(link);
  }
  std::sort(links_.begin(), links_.end(),
            [](const Link& a, const Link& b) { return std::tie(a.u, a.v) < std::tie(b.u, b.v); });

  edges_.reserve(2 * links_.size());
  for (const Link& link : links_) {
    edges_.push_back({link.u, link.v, link.capacity});
    edges_.push_back({link.v, link.u, link.capacity});
  }

  adjacency_.assign(node_count_, {});
  edge_lookup_.assign(static_cast<std::size_t>(node_count_) * node_count_, -1);
  for (int i = 0; i < static_cast<int>(edges_.size()); ++i) {
    adjacency_[edges_[i].u].push_back(edges_[i].v);
    edge_lookup_[static_cast<std::size_t>(edges_[i].u) * node_count_ + edges_[i].v] = i;
  }
  for (auto& nbrs : adjacency_) std::sort(nbrs.begin(), nbrs.end());

  // Reject disconnected inputs.
  std::vector<char> reached(node_count_, 0);
  std::deque<int> queue{0};
  reached[0] = 1;
  int count = 1;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int v : adjacency_[u]) {
      if (!reached[v]) {
        reached[v] = 1;
        ++count;
        queue.push_back(v);
      }
    }
  }
  if (count != node_count_) throw std::invalid_argument("graph not connected");
}

int NetworkGraph::edge_index(int u, int v) const {
  check_node(u, node_count_, "edge_index");
  check_node(v, node_count_, "edge_index");
  return edge_lookup_[static_cast<std::size_t>(u) * node_count_ + v];
}

std::vector<int> DistanceTables::walk(int a, int b) const {
  std::vector<int> nodes{a};
  int cur = a;
  while (cur != b) {
    cur = next(cur, b);
    nodes.push_back(cur);
  }
  return nodes;
}

DistanceTables all_pairs_shortest_paths(const NetworkGraph& g) {
  const int n = g.node_count();
  DistanceTables t;
  t.n = n;
  t.dist.assign(static_cast<std::size_t>(n) * n, -1);
  t.next_hop.assign(static_cast<std::size_t>(n) * n, -1);

  std::vector<int> queue(n);
  for (int src = 0; src < n; ++src) {
    int* dist = &t.dist[static_cast<std::size_t>(src) * n];
    dist[src] = 0;
    int head = 0, tail = 0;
    queue[tail++] = src;
    while (head < tail) {
      const int u = queue[head++];
      for (int v : g.neighbors(u)) {
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          queue[tail++] = v;
        }
      }
    }
    if (tail != n) throw std::invalid_argument("graph not connected");
  }

  // First hop toward each destination: lowest-id neighbor one step closer.
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (a == b) {
        t.next_hop[static_cast<std::size_t>(a) * n + b] = a;
        continue;
      }
      for (int w : g.neighbors(a)) {
        if (t.distance(w, b) + 1 == t.distance(a, b)) {
          t.next_hop[static_cast<std::size_t>(a) * n + b] = w;
          break;
        }
      }
    }
  }
  return t;
}

namespace {

// Brandes' accumulation over an adjacency list (local node ids). Returns
// per-node scores with unordered pairs counted once, endpoints excluded.
std::vector<double> brandes(const std::vector<std::vector<int>>& adj) {
  const int n = static_cast<int>(adj.size());
  std::vector<double> score(n, 0.0);
  std::vector<int> dist(n), order(n);
  std::vector<double> sigma(n), delta(n);
  std::vector<std::vector<int>> preds(n);

  for (int src = 0; src < n; ++src) {
    std::fill(dist.begin(), dist.end(), -1);
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    for (auto& p : preds) p.clear();

    int head = 0, tail = 0;
    dist[src] = 0;
    sigma[src] = 1.0;
    order[tail++] = src;
    while (head < tail) {
      const int u = order[head++];
      for (int v : adj[u]) {
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          order[tail++] = v;
        }
        if (dist[v] == dist[u] + 1) {
          sigma[v] += sigma[u];
          preds[v].push_back(u);
        }
      }
    }
    for (int i = tail - 1; i > 0; --i) {
      const int w = order[i];
      for (int u : preds[w]) delta[u] += sigma[u] / sigma[w] * (1.0 + delta[w]);
      if (w != src) score[w] += delta[w];
    }
  }
  for (double& s : score) s /= 2.0;  // each unordered pair visited from both endpoints
  return score;
}

}  // namespace

std::vector<double> betweenness_centrality(const NetworkGraph& g) {
  std::vector<std::vector<int>> adj(g.node_count());
  for (int u = 0; u < g.node_count(); ++u) adj[u] = g.neighbors(u);
  return brandes(adj);
}

std::vector<double> betweenness_on_subset(const NetworkGraph& g, const std::vector<int>& nodes) {
  if (nodes.empty()) throw std::invalid_argument("betweenness_on_subset: empty node set");
  std::vector<int> local(g.node_count(), -1);
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i) local[nodes[i]] = i;
  std::vector<std::vector<int>> adj(nodes.size());
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
    for (int v : g.neighbors(nodes[i])) {
      if (local[v] >= 0) adj[i].push_back(local[v]);
    }
  }
  return brandes(adj);
}

int max_betweenness_node(const NetworkGraph& g, const std::vector<int>& nodes) {
  std::vector<int> sorted = nodes;
  std::sort(sorted.begin(), sorted.end());
  const std::vector<double> score = betweenness_on_subset(g, sorted);
  int best = sorted[0];
  double best_score = score[0];
  for (int i = 1; i < static_cast<int>(sorted.size()); ++i) {
    if (score[i] > best_score) {
      best_score = score[i];
      best = sorted[i];
    }
  }
  return best;
}

std::vector<std::vector<int>> PartitionResult::cells() const {
  std::vector<std::vector<int>> out(centers.size());
  std::map<int, int> cell_of;
  for (int i = 0; i < static_cast<int>(centers.size()); ++i) cell_of[centers[i]] = i;
  for (int node = 0; node < static_cast<int>(affiliation.size()); ++node) {
    out[cell_of.at(affiliation[node])].push_back(node);
  }
  return out;
}

namespace {

std::vector<int> affiliate(const DistanceTables& dt, const std::vector<int>& centers) {
  std::vector<int> out(dt.n);
  for (int node = 0; node < dt.n; ++node) {
    int best = centers[0];
    int best_dist = dt.distance(node, best);
    for (int c : centers) {  // centers ascending, so first minimum has the lowest id
      const int d = dt.distance(node, c);
      if (d < best_dist) {
        best_dist = d;
        best = c;
      }
    }
    out[node] = best;
  }
  return out;
}

std::vector<int> recenter(const NetworkGraph& g, const std::vector<int>& affiliation,
                          const std::vector<int>& centers) {
  std::vector<int> next;
  next.reserve(centers.size());
  for (int c : centers) {
    std::vector<int> cell;
    for (int node = 0; node < static_cast<int>(affiliation.size()); ++node) {
      if (affiliation[node] == c) cell.push_back(node);
    }
    next.push_back(max_betweenness_node(g, cell));
  }
  std::sort(next.begin(), next.end());
  return next;
}

}  // namespace

PartitionResult compute_partitions(const NetworkGraph& g, int center_count, int max_iters,
                                   std::uint64_t rng_seed) {
  const int n = g.node_count();
  if (center_count > n) throw std::invalid_argument("more partitions than nodes");
  if (center_count < 1) throw std::invalid_argument("center_count must be >= 1");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");

  PartitionResult result;
  if (center_count == 1) {
    // Single partition: the whole graph, centered on its max-betweenness node.
    const std::vector<double> score = betweenness_centrality(g);
    int center = 0;
    for (int i = 1; i < n; ++i) {
      if (score[i] > score[center]) center = i;
    }
    result.centers = {center};
    result.affiliation.assign(n, center);
    result.iterations_used = 0;
    return result;
  }

  const DistanceTables dt = all_pairs_shortest_paths(g);

  // Initial centers: `center_count` distinct nodes via partial Fisher-Yates.
  SplitMix64 rng(rng_seed);
  std::vector<int> pool(n);
  for (int i = 0; i < n; ++i) pool[i] = i;
  for (int i = 0; i < center_count; ++i) {
    const int j = i + rng.next_index(n - i);
    std::swap(pool[i], pool[j]);
  }
  std::vector<int> centers(pool.begin(), pool.begin() + center_count);
  std::sort(centers.begin(), centers.end());

  std::vector<std::vector<int>> seen{centers};
  int iterations = 0;
  while (iterations < max_iters) {
    ++iterations;
    const std::vector<int> affiliation = affiliate(dt, centers);
    centers = recenter(g, affiliation, centers);
    if (std::find(seen.begin(), seen.end(), centers) != seen.end()) break;
    seen.push_back(centers);
  }

  result.centers = centers;
  result.affiliation = affiliate(dt, centers);
  result.iterations_used = iterations;
  return result;
}

}  // namespace staterep
