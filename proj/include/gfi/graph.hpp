#pragma once

#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace gfi {

/// N x d field over graph vertices, one row per vertex.
using VertexField = Eigen::MatrixXd;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct Edge {
  int u = 0;
  int v = 0;
  double weight = 0.0;
};

/// Undirected graph with nonnegative edge weights stored as symmetric CSR.
/// Parallel edges collapse to the lightest one; self-loops are rejected.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  WeightedGraph(int num_vertices, std::span<const Edge> edges);

  int num_vertices() const { return static_cast<int>(offsets_.size()) - 1; }
  /// Number of undirected edges.
  std::size_t num_edges() const { return targets_.size() / 2; }

  std::span<const int> neighbors(int v) const {
    return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
  }
  std::span<const double> weights(int v) const {
    return {weights_.data() + offsets_[v], weights_.data() + offsets_[v + 1]};
  }
  int degree(int v) const { return offsets_[v + 1] - offsets_[v]; }

  /// Each undirected edge once, u < v.
  std::vector<Edge> edges() const;
  double min_positive_weight() const;

 private:
  std::vector<int> offsets_{0};
  std::vector<int> targets_;
  std::vector<double> weights_;
};

/// Multi-source Dijkstra. Unreachable vertices get kInfinity.
std::vector<double> sssp(const WeightedGraph& graph, std::span<const int> sources);
std::vector<double> sssp(const WeightedGraph& graph, int source);

/// Hop-count BFS levels from `root`; -1 for unreachable vertices.
std::vector<int> bfs_levels(const WeightedGraph& graph, int root);

/// Component label per vertex, contiguous from 0 in order of first vertex.
std::vector<int> connected_components(const WeightedGraph& graph);
int count_components(std::span<const int> labels);
bool is_connected(const WeightedGraph& graph);

/// Subgraph induced by `vertices`; local vertex i corresponds to vertices[i].
WeightedGraph induced_subgraph(const WeightedGraph& graph, std::span<const int> vertices);

/// Upper bound on the weighted diameter: twice the eccentricity found by a
/// double sweep from `start`.
double diameter_upper_bound(const WeightedGraph& graph, int start = 0);

}  // namespace gfi
