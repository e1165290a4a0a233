#pragma once

#include <algorithm>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lohe {

struct Edge {
  int i;  // zero-based, i < j
  int j;
  double gain;
};

struct Neighbor {
  int index;
  double gain;
};

// One-based endpoints, as accepted from configs and edge lists.
struct WeightedPair {
  int i;
  int j;
  double gain;
};

// Undirected simple connected graph with strictly positive symmetric gains.
// Nodes are 1..N externally and 0..N−1 in every accessor below.
class CouplingGraph {
 public:
  CouplingGraph(int node_count, const std::vector<WeightedPair>& pairs)
      : node_count_(node_count), adjacency_(node_count > 0 ? node_count : 0) {
    if (node_count < 1)
      throw std::invalid_argument("graph: node count must be positive");
    for (const auto& p : pairs) {
      if (p.i < 1 || p.i > node_count || p.j < 1 || p.j > node_count)
        throw std::invalid_argument("graph: node index out of range");
      if (p.i == p.j) throw std::invalid_argument("graph: self-loop");
      if (!(p.gain > 0.0))
        throw std::invalid_argument("graph: gain must be positive");
      const int a = std::min(p.i, p.j) - 1;
      const int b = std::max(p.i, p.j) - 1;
      if (has_edge(a, b)) throw std::invalid_argument("graph: duplicate edge");
      edges_.push_back({a, b, p.gain});
      adjacency_[a].push_back({b, p.gain});
      adjacency_[b].push_back({a, p.gain});
    }
    if (!connected()) throw std::invalid_argument("graph not connected");
  }

  int node_count() const { return node_count_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const Neighbor> neighbors(int i) const { return adjacency_.at(i); }

  bool has_edge(int a, int b) const {
    for (const auto& nb : adjacency_.at(a))
      if (nb.index == b) return true;
    return false;
  }

  // K = min over edges of k_ij; +inf for the edgeless single-node graph.
  double min_gain() const {
    double k = std::numeric_limits<double>::infinity();
    for (const auto& e : edges_) k = std::min(k, e.gain);
    return k;
  }

  // Same topology, every gain multiplied by c > 0.
  CouplingGraph scaled(double c) const {
    std::vector<WeightedPair> pairs;
    pairs.reserve(edges_.size());
    for (const auto& e : edges_) pairs.push_back({e.i + 1, e.j + 1, e.gain * c});
    return CouplingGraph(node_count_, pairs);
  }

 private:
  bool connected() const {
    std::vector<char> seen(node_count_, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (const auto& nb : adjacency_[v]) {
        if (!seen[nb.index]) {
          seen[nb.index] = 1;
          ++reached;
          stack.push_back(nb.index);
        }
      }
    }
    return reached == node_count_;
  }

  int node_count_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Neighbor>> adjacency_;
};

inline CouplingGraph from_edge_list(int node_count,
                                    const std::vector<WeightedPair>& pairs) {
  return CouplingGraph(node_count, pairs);
}

inline CouplingGraph path_graph(int node_count, double gain) {
  if (node_count < 2) throw std::invalid_argument("path_graph: N must be >= 2");
  std::vector<WeightedPair> pairs;
  for (int i = 1; i < node_count; ++i) pairs.push_back({i, i + 1, gain});
  return CouplingGraph(node_count, pairs);
}

inline CouplingGraph cycle_graph(int node_count, double gain) {
  if (node_count < 3)
    throw std::invalid_argument("cycle_graph: N must be >= 3");
  std::vector<WeightedPair> pairs;
  for (int i = 1; i < node_count; ++i) pairs.push_back({i, i + 1, gain});
  pairs.push_back({node_count, 1, gain});
  return CouplingGraph(node_count, pairs);
}

inline CouplingGraph complete_graph(int node_count, double gain) {
  if (node_count < 2)
    throw std::invalid_argument("complete_graph: N must be >= 2");
  std::vector<WeightedPair> pairs;
  for (int i = 1; i <= node_count; ++i)
    for (int j = i + 1; j <= node_count; ++j) pairs.push_back({i, j, gain});
  return CouplingGraph(node_count, pairs);
}

inline double min_gain(const CouplingGraph& g) { return g.min_gain(); }

}  // namespace lohe
