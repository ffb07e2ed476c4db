#pragma once

#include <cstdint>
#include <memory>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "gfi/graph.hpp"
#include "gfi/integrator.hpp"
#include "gfi/kernel.hpp"
#include "gfi/random.hpp"

namespace gfi {

struct SFConfig {
  int sep_size = 8;
  double unit_size = 0.1;
  int threshold = 2000;
  std::uint64_t seed = 0;
  double balance = 0.25;

  void validate() const;
};

struct Separator {
  std::vector<int> a, b, s;  // sorted, disjoint, covering V
  /// max(0, balance * N - min(|A|, |B|)); zero when the cut is balanced.
  double shortfall = 0.0;
};

/// BFS level cut from a pseudo-peripheral root. Prefers the smallest level
/// meeting the balance bound; otherwise repacks the components left by a level
/// into two sides and keeps the most balanced cut. Requires N >= 3, connected.
Separator balanced_separator(const WeightedGraph& graph, Rng& rng, double balance);

struct TruncatedSeparator {
  std::vector<int> anchors;  // S', in draw order
  std::vector<int> to_a;     // leftovers joining A
  std::vector<int> to_b;
};

/// Keeps min(s, |S|) uniformly drawn anchors; each leftover joins the side
/// holding most of its A/B neighbors, ties broken by the rng.
TruncatedSeparator truncate_separator(const WeightedGraph& graph, const Separator& sep, int s,
                                      Rng& rng);

struct SFNode {
  std::vector<int> vertices;  // global ids
  bool leaf = true;

  // Leaf: local subgraph, plus all-pairs distances when small.
  int leaf_id = -1;
  WeightedGraph subgraph;
  Eigen::MatrixXd distances;

  // Internal: anchors are local indices; every other local vertex belongs to
  // exactly one group (a connected piece of A or B) and owns a bucket.
  std::vector<int> anchors;
  std::vector<std::vector<double>> anchor_distances;
  std::vector<int> group;   // -1 for anchors
  std::vector<int> bucket;  // round(tau / unit), -1 for anchors
  int num_buckets = 0;
  double shortfall = 0.0;
  int side_a_size = 0;
  int side_b_size = 0;
  std::vector<std::unique_ptr<SFNode>> children;  // one per group
};

inline constexpr int kDenseLeafLimit = 512;

struct SFTree {
  std::unique_ptr<SFNode> root;
  int num_vertices = 0;
  int num_leaves = 0;
  SFConfig config;

  int depth() const;
};

/// Recursive factorization of a connected graph.
SFTree sf_build(const WeightedGraph& graph, const SFConfig& config);

/// Precomputed f(dist) blocks per leaf id.
using LeafKernelCache = std::unordered_map<int, Eigen::MatrixXd>;

LeafKernelCache build_leaf_cache(const SFTree& tree, const ScalarKernelFn& f, std::size_t budget_bytes);

VertexField sf_apply(const SFTree& tree, const ScalarKernelFn& f, const VertexField& field,
                     const LeafKernelCache* cache = nullptr);

/// Separator factorization over every connected component.
class SFIntegrator : public FieldIntegrator {
 public:
  SFIntegrator(const WeightedGraph& graph, ScalarKernelFn f, SFConfig config,
               std::size_t leaf_cache_bytes = std::size_t{512} << 20);

  VertexField apply(const VertexField& field) const override;
  int num_vertices() const override { return n_; }
  std::string name() const override { return "sf"; }

  const std::vector<SFTree>& trees() const { return trees_; }

 private:
  int n_;
  ScalarKernelFn f_;
  std::vector<std::vector<int>> components_;
  std::vector<SFTree> trees_;
  std::vector<LeafKernelCache> caches_;
};

}  // namespace gfi
