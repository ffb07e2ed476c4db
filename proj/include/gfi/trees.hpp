#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "gfi/graph.hpp"
#include "gfi/integrator.hpp"
#include "gfi/random.hpp"

namespace gfi {

/// Rooted weighted tree whose nodes include one node per graph vertex.
struct MetricTree {
  std::vector<int> parent;            // -1 at the root
  std::vector<double> parent_weight;  // weight of the edge to the parent
  std::vector<int> leaf_map;          // graph vertex -> tree node
  int root = 0;

  int num_nodes() const { return static_cast<int>(parent.size()); }
  int num_vertices() const { return static_cast<int>(leaf_map.size()); }
  /// Nodes ordered so that every parent precedes its children.
  std::vector<int> topological_order() const;
};

/// Tree path distance from graph vertex `source` to every graph vertex.
std::vector<double> tree_distances(const MetricTree& tree, int source);

/// Kruskal minimum spanning tree rooted at vertex 0.
MetricTree mst(const WeightedGraph& graph);

/// Hierarchical low-diameter decomposition over the graph's own vertices.
MetricTree bartal_tree(const WeightedGraph& graph, Rng& rng);

/// Hierarchically well-separated tree with graph vertices as leaves.
MetricTree frt_tree(const WeightedGraph& graph, Rng& rng);

/// K(u, v) = sum_j a_j exp(c_j dist_T(u, v)).
struct ExpTerm {
  std::complex<double> a;
  std::complex<double> c;
};

/// Real part of sum_w K(w, v) F(w) over graph vertices, one upward and one
/// downward sweep per term.
VertexField tree_integrate_expsum(const MetricTree& tree, const std::vector<ExpTerm>& terms,
                                  const VertexField& field);

/// Mean of tree_integrate_expsum over the trees.
VertexField ensemble_integrate(const std::vector<MetricTree>& trees, const std::vector<ExpTerm>& terms,
                               const VertexField& field);

enum class TreeKind { kMst, kBartal, kFrt };

/// Averages the exponential kernel exp(-lambda d) over k sampled trees.
class TreeEnsembleIntegrator : public FieldIntegrator {
 public:
  TreeEnsembleIntegrator(const WeightedGraph& graph, TreeKind kind, int k, double lambda,
                         std::uint64_t seed);

  VertexField apply(const VertexField& field) const override;
  int num_vertices() const override { return n_; }
  std::string name() const override;

  const std::vector<MetricTree>& trees() const { return trees_; }

 private:
  int n_;
  TreeKind kind_;
  std::vector<MetricTree> trees_;
  std::vector<ExpTerm> terms_;
};

}  // namespace gfi
