#include "gfi/sf.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <optional>

#include "gfi/error.hpp"
#include "gfi/hankel.hpp"

namespace gfi {

void SFConfig::validate() const {
  if (sep_size < 1) throw InvalidArgument("sep_size must be at least 1");
  if (!(unit_size > 0.0)) throw InvalidArgument("unit_size must be positive");
  if (threshold < 1) throw InvalidArgument("threshold must be at least 1");
  if (!(balance > 0.0 && balance < 0.5)) throw InvalidArgument("balance must lie in (0, 0.5)");
}

namespace {

struct LevelCut {
  int level = 0;
  int size = 0;       // |S|
  int balance = 0;    // min side
  bool repacked = false;
};

// Components of the graph with `removed` vertices deleted. Labels -1 on removed.
std::vector<int> components_without(const WeightedGraph& g, const std::vector<char>& removed,
                                    std::vector<int>& sizes) {
  const int n = g.num_vertices();
  std::vector<int> label(n, -1);
  std::vector<int> stack;
  sizes.clear();
  for (int s = 0; s < n; ++s) {
    if (removed[s] || label[s] >= 0) continue;
    const int id = static_cast<int>(sizes.size());
    sizes.push_back(0);
    label[s] = id;
    stack.push_back(s);
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      ++sizes[id];
      for (int v : g.neighbors(u))
        if (!removed[v] && label[v] < 0) {
          label[v] = id;
          stack.push_back(v);
        }
    }
  }
  return label;
}

// Largest-first greedy packing of component sizes into two sides; side per component.
std::vector<int> repack(const std::vector<int>& sizes, int& side_a, int& side_b) {
  std::vector<int> order(sizes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return sizes[x] > sizes[y]; });
  std::vector<int> side(sizes.size());
  side_a = side_b = 0;
  for (int c : order) {
    if (side_a <= side_b) {
      side[c] = 0;
      side_a += sizes[c];
    } else {
      side[c] = 1;
      side_b += sizes[c];
    }
  }
  return side;
}

// Levels examined by the repacking fallback.
constexpr int kMaxFallbackLevels = 64;

}  // namespace

Separator balanced_separator(const WeightedGraph& graph, Rng& rng, double balance) {
  const int n = graph.num_vertices();
  if (n < 3) throw InvalidArgument("separator needs at least 3 vertices");
  if (!(balance > 0.0 && balance < 0.5)) throw InvalidArgument("balance must lie in (0, 0.5)");

  const std::vector<int> first = bfs_levels(graph, uniform_index(n, rng));
  if (std::find(first.begin(), first.end(), -1) != first.end())
    throw InvalidArgument("separator needs a connected graph");
  const int root = static_cast<int>(std::max_element(first.begin(), first.end()) - first.begin());
  const std::vector<int> level = bfs_levels(graph, root);
  const int depth = *std::max_element(level.begin(), level.end());
  std::vector<int> count(depth + 1, 0);
  for (int l : level) ++count[l];
  std::vector<int> prefix(depth + 2, 0);
  for (int l = 0; l <= depth; ++l) prefix[l + 1] = prefix[l] + count[l];

  const double need = balance * n;
  auto better = [&](const LevelCut& x, const LevelCut& y) {
    const bool xb = x.balance >= need, yb = y.balance >= need;
    if (xb != yb) return xb;
    if (xb) return x.size != y.size ? x.size < y.size : x.balance > y.balance;
    return x.balance != y.balance ? x.balance > y.balance : x.size < y.size;
  };

  std::optional<LevelCut> best;
  for (int l = 0; l <= depth; ++l) {
    LevelCut cut{l, count[l], std::min(prefix[l], n - prefix[l + 1]), false};
    if (cut.balance >= need && (!best || better(cut, *best))) best = cut;
  }

  if (!best) {
    // Order levels by how close they sit to the median vertex, then scan a window.
    std::vector<int> order(depth + 1);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
      return std::abs(prefix[x] + count[x] / 2 - n / 2) < std::abs(prefix[y] + count[y] / 2 - n / 2);
    });
    order.resize(std::min<std::size_t>(order.size(), kMaxFallbackLevels));
    std::vector<char> removed(n);
    std::vector<int> sizes;
    for (int l : order) {
      for (int v = 0; v < n; ++v) removed[v] = level[v] == l;
      components_without(graph, removed, sizes);
      int sa = 0, sb = 0;
      repack(sizes, sa, sb);
      LevelCut natural{l, count[l], std::min(prefix[l], n - prefix[l + 1]), false};
      LevelCut packed{l, count[l], std::min(sa, sb), true};
      const LevelCut& cut = packed.balance > natural.balance ? packed : natural;
      if (!best || better(cut, *best)) best = cut;
    }
  }

  Separator sep;
  const int l = best->level;
  if (best->repacked) {
    std::vector<char> removed(n);
    for (int v = 0; v < n; ++v) removed[v] = level[v] == l;
    std::vector<int> sizes;
    const std::vector<int> label = components_without(graph, removed, sizes);
    int sa = 0, sb = 0;
    const std::vector<int> side = repack(sizes, sa, sb);
    for (int v = 0; v < n; ++v) {
      if (removed[v]) sep.s.push_back(v);
      else (side[label[v]] == 0 ? sep.a : sep.b).push_back(v);
    }
  } else {
    for (int v = 0; v < n; ++v) {
      if (level[v] < l) sep.a.push_back(v);
      else if (level[v] > l) sep.b.push_back(v);
      else sep.s.push_back(v);
    }
  }
  const double got = static_cast<double>(std::min(sep.a.size(), sep.b.size()));
  sep.shortfall = std::max(0.0, need - got);
  return sep;
}

TruncatedSeparator truncate_separator(const WeightedGraph& graph, const Separator& sep, int s,
                                      Rng& rng) {
  if (s < 1) throw InvalidArgument("separator size must be at least 1");
  TruncatedSeparator out;
  const int total = static_cast<int>(sep.s.size());
  const int keep = std::min(s, total);
  std::vector<int> picked = sample_without_replacement(total, keep, rng);
  std::vector<char> is_anchor(total, 0);
  for (int i : picked) {
    out.anchors.push_back(sep.s[i]);
    is_anchor[i] = 1;
  }
  std::vector<int> side(graph.num_vertices(), -1);
  for (int v : sep.a) side[v] = 0;
  for (int v : sep.b) side[v] = 1;
  for (int i = 0; i < total; ++i) {
    if (is_anchor[i]) continue;
    const int v = sep.s[i];
    int na = 0, nb = 0;
    for (int u : graph.neighbors(v)) {
      if (side[u] == 0) ++na;
      else if (side[u] == 1) ++nb;
    }
    const bool to_a = na != nb ? na > nb : (rng() & 1u) == 0;
    (to_a ? out.to_a : out.to_b).push_back(v);
  }
  return out;
}

namespace {

// Bucket indices beyond this are treated as a configuration error.
constexpr double kMaxBuckets = 1 << 26;

struct Builder {
  const SFConfig& config;
  Rng rng;
  int leaves = 0;

  void make_leaf(SFNode& node, WeightedGraph graph) {
    node.leaf = true;
    node.leaf_id = leaves++;
    const int n = graph.num_vertices();
    if (n <= kDenseLeafLimit) {
      node.distances.resize(n, n);
      for (int j = 0; j < n; ++j) {
        const std::vector<double> d = sssp(graph, j);
        for (int i = 0; i < n; ++i) node.distances(i, j) = d[i];
      }
    }
    node.subgraph = std::move(graph);
  }

  std::unique_ptr<SFNode> build(WeightedGraph graph, std::vector<int> ids) {
    auto node = std::make_unique<SFNode>();
    node->vertices = std::move(ids);
    const int n = graph.num_vertices();
    if (n <= config.threshold || n < 3) {
      make_leaf(*node, std::move(graph));
      return node;
    }

    const Separator sep = balanced_separator(graph, rng, config.balance);
    const TruncatedSeparator trunc = truncate_separator(graph, sep, config.sep_size, rng);
    std::vector<int> side(n, -1);
    for (int v : sep.a) side[v] = 0;
    for (int v : sep.b) side[v] = 1;
    for (int v : trunc.to_a) side[v] = 0;
    for (int v : trunc.to_b) side[v] = 1;
    const int size_a = static_cast<int>(std::count(side.begin(), side.end(), 0));
    const int size_b = static_cast<int>(std::count(side.begin(), side.end(), 1));
    if (size_a == 0 || size_b == 0) {
      make_leaf(*node, std::move(graph));
      return node;
    }

    node->leaf = false;
    node->anchors = trunc.anchors;
    node->shortfall = sep.shortfall;
    node->side_a_size = size_a;
    node->side_b_size = size_b;

    // Groups: connected pieces of G[A] and G[B].
    node->group.assign(n, -1);
    std::vector<std::vector<int>> members;
    std::vector<int> stack;
    for (int s = 0; s < n; ++s) {
      if (side[s] < 0 || node->group[s] >= 0) continue;
      const int id = static_cast<int>(members.size());
      members.emplace_back();
      node->group[s] = id;
      stack.push_back(s);
      while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        members[id].push_back(u);
        for (int v : graph.neighbors(u))
          if (side[v] == side[u] && node->group[v] < 0) {
            node->group[v] = id;
            stack.push_back(v);
          }
      }
    }

    std::vector<double> tau(n, kInfinity);
    for (int a : node->anchors) {
      node->anchor_distances.push_back(sssp(graph, a));
      const std::vector<double>& d = node->anchor_distances.back();
      for (int v = 0; v < n; ++v) tau[v] = std::min(tau[v], d[v]);
    }
    node->bucket.assign(n, -1);
    for (int v = 0; v < n; ++v) {
      if (side[v] < 0) continue;
      const double q = std::round(tau[v] / config.unit_size);
      if (!(q < kMaxBuckets)) throw InvalidArgument("unit_size too small for the graph's distances");
      node->bucket[v] = static_cast<int>(q);
      node->num_buckets = std::max(node->num_buckets, node->bucket[v] + 1);
    }

    for (auto& group : members) {
      std::sort(group.begin(), group.end());
      std::vector<int> child_ids(group.size());
      for (std::size_t i = 0; i < group.size(); ++i) child_ids[i] = node->vertices[group[i]];
      node->children.push_back(build(induced_subgraph(graph, group), std::move(child_ids)));
    }
    return node;
  }
};

int node_depth(const SFNode& node) {
  int d = 0;
  for (const auto& c : node.children) d = std::max(d, 1 + node_depth(*c));
  return d;
}

Eigen::MatrixXd gather(const VertexField& field, const std::vector<int>& ids) {
  Eigen::MatrixXd out(ids.size(), field.cols());
  for (std::size_t i = 0; i < ids.size(); ++i) out.row(i) = field.row(ids[i]);
  return out;
}

Eigen::MatrixXd leaf_kernel(const SFNode& node, const ScalarKernelFn& f) {
  const int n = static_cast<int>(node.vertices.size());
  Eigen::MatrixXd k(n, n);
  if (node.distances.size() > 0) {
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) k(i, j) = f(node.distances(i, j));
  } else {
    for (int j = 0; j < n; ++j) {
      const std::vector<double> d = sssp(node.subgraph, j);
      for (int i = 0; i < n; ++i) k(i, j) = f(d[i]);
    }
  }
  return k;
}

struct Applier {
  const ScalarKernelFn& f;
  double unit;
  const VertexField& field;
  VertexField& out;
  const LeafKernelCache* cache;

  void leaf(const SFNode& node) {
    const std::vector<int>& ids = node.vertices;
    const int n = static_cast<int>(ids.size());
    const Eigen::MatrixXd local = gather(field, ids);
    if (cache) {
      auto it = cache->find(node.leaf_id);
      if (it != cache->end()) {
        const Eigen::MatrixXd r = it->second * local;
        for (int i = 0; i < n; ++i) out.row(ids[i]) += r.row(i);
        return;
      }
    }
    Eigen::MatrixXd r = Eigen::MatrixXd::Zero(n, field.cols());
    if (node.distances.size() > 0) {
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) r.row(i) += f(node.distances(i, j)) * local.row(j);
    } else {
      for (int j = 0; j < n; ++j) {
        const std::vector<double> d = sssp(node.subgraph, j);
        for (int i = 0; i < n; ++i) r.row(i) += f(d[i]) * local.row(j);
      }
    }
    for (int i = 0; i < n; ++i) out.row(ids[i]) += r.row(i);
  }

  void separator_pass(const SFNode& node, const Eigen::MatrixXd& local) {
    const std::vector<int>& ids = node.vertices;
    const int n = static_cast<int>(ids.size());
    for (std::size_t k = 0; k < node.anchors.size(); ++k) {
      const int s = node.anchors[k];
      const std::vector<double>& d = node.anchor_distances[k];
      Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(field.cols());
      for (int w = 0; w < n; ++w) {
        if (!(d[w] < kInfinity)) continue;
        const double kw = f(d[w]);
        acc += kw * local.row(w);
        if (node.group[w] >= 0) out.row(ids[w]) += kw * local.row(s);
      }
      out.row(ids[s]) += acc;
    }
  }

  void cross_pass(const SFNode& node, const Eigen::MatrixXd& local) {
    const std::vector<int>& ids = node.vertices;
    const int n = static_cast<int>(ids.size());
    const int d = node.num_buckets;
    const int groups = static_cast<int>(node.children.size());
    const Eigen::Index cols = field.cols();

    Eigen::MatrixXd z = Eigen::MatrixXd::Zero(d, cols);
    for (int v = 0; v < n; ++v)
      if (node.group[v] >= 0) z.row(node.bucket[v]) += local.row(v);

    if (f.is_exponential()) {
      const double rho = std::exp(-f.decay() * unit);
      const Eigen::MatrixXd hz = geometric_hankel_matvec(rho, 1.0, d, z);
      // (H z_g)[q] = rho^q * sum_{w in g} rho^{q_w} F(w)
      std::vector<double> power(d);
      for (int q = 0; q < d; ++q) power[q] = std::exp(-f.decay() * unit * q);
      Eigen::MatrixXd own = Eigen::MatrixXd::Zero(groups, cols);
      for (int v = 0; v < n; ++v)
        if (node.group[v] >= 0) own.row(node.group[v]) += power[node.bucket[v]] * local.row(v);
      for (int v = 0; v < n; ++v) {
        const int g = node.group[v];
        if (g < 0) continue;
        out.row(ids[v]) += hz.row(node.bucket[v]) - power[node.bucket[v]] * own.row(g);
      }
      return;
    }

    const HankelSpec spec = build_kernel_sequence(f, unit, d);
    const Eigen::MatrixXd hz = hankel_matvec(spec, z);
    std::vector<std::vector<int>> members(groups);
    for (int v = 0; v < n; ++v)
      if (node.group[v] >= 0) members[node.group[v]].push_back(v);
    const double fft_cost = 8.0 * d * std::max(1.0, std::log2(static_cast<double>(d)));
    for (const std::vector<int>& g : members) {
      const double m = static_cast<double>(g.size());
      if (m * m <= fft_cost) {
        for (int v : g) {
          Eigen::RowVectorXd acc = hz.row(node.bucket[v]);
          for (int w : g) acc -= spec.h[node.bucket[v] + node.bucket[w]] * local.row(w);
          out.row(ids[v]) += acc;
        }
      } else {
        Eigen::MatrixXd zg = Eigen::MatrixXd::Zero(d, cols);
        for (int w : g) zg.row(node.bucket[w]) += local.row(w);
        const Eigen::MatrixXd hzg = hankel_matvec(spec, zg);
        for (int v : g) out.row(ids[v]) += hz.row(node.bucket[v]) - hzg.row(node.bucket[v]);
      }
    }
  }

  void visit(const SFNode& node) {
    if (node.leaf) {
      leaf(node);
      return;
    }
    const Eigen::MatrixXd local = gather(field, node.vertices);
    separator_pass(node, local);
    cross_pass(node, local);
    for (const auto& child : node.children) visit(*child);
  }
};

void collect_leaves(const SFNode& node, std::vector<const SFNode*>& out) {
  if (node.leaf) out.push_back(&node);
  for (const auto& c : node.children) collect_leaves(*c, out);
}

}  // namespace

int SFTree::depth() const { return root ? node_depth(*root) : 0; }

SFTree sf_build(const WeightedGraph& graph, const SFConfig& config) {
  config.validate();
  if (graph.num_vertices() == 0) throw InvalidArgument("graph has no vertices");
  if (!is_connected(graph)) throw InvalidArgument("separator factorization needs a connected graph");
  Builder builder{config, Rng(config.seed)};
  std::vector<int> ids(graph.num_vertices());
  std::iota(ids.begin(), ids.end(), 0);
  SFTree tree;
  tree.root = builder.build(graph, std::move(ids));
  tree.num_vertices = graph.num_vertices();
  tree.num_leaves = builder.leaves;
  tree.config = config;
  return tree;
}

LeafKernelCache build_leaf_cache(const SFTree& tree, const ScalarKernelFn& f, std::size_t budget_bytes) {
  LeafKernelCache cache;
  std::vector<const SFNode*> leaves;
  if (tree.root) collect_leaves(*tree.root, leaves);
  std::size_t used = 0;
  for (const SFNode* leaf : leaves) {
    const std::size_t bytes = leaf->vertices.size() * leaf->vertices.size() * sizeof(double);
    if (used + bytes > budget_bytes) continue;
    used += bytes;
    cache.emplace(leaf->leaf_id, leaf_kernel(*leaf, f));
  }
  return cache;
}

VertexField sf_apply(const SFTree& tree, const ScalarKernelFn& f, const VertexField& field,
                     const LeafKernelCache* cache) {
  if (field.rows() != tree.num_vertices) throw InvalidArgument("field rows must equal vertex count");
  VertexField out = VertexField::Zero(field.rows(), field.cols());
  if (!tree.root) return out;
  Applier{f, tree.config.unit_size, field, out, cache}.visit(*tree.root);
  return out;
}

SFIntegrator::SFIntegrator(const WeightedGraph& graph, ScalarKernelFn f, SFConfig config,
                           std::size_t leaf_cache_bytes)
    : n_(graph.num_vertices()), f_(std::move(f)) {
  const auto start = std::chrono::steady_clock::now();
  config.validate();
  const std::vector<int> label = connected_components(graph);
  components_.resize(count_components(label));
  for (int v = 0; v < n_; ++v) components_[label[v]].push_back(v);
  std::size_t budget = leaf_cache_bytes;
  for (std::size_t c = 0; c < components_.size(); ++c) {
    SFConfig local = config;
    local.seed = split_seed(config.seed, c);
    trees_.push_back(sf_build(induced_subgraph(graph, components_[c]), local));
    caches_.push_back(build_leaf_cache(trees_.back(), f_, budget));
    for (const auto& [id, k] : caches_.back()) budget -= static_cast<std::size_t>(k.size()) * sizeof(double);
  }
  preprocess_ms_ =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

VertexField SFIntegrator::apply(const VertexField& field) const {
  if (field.rows() != n_) throw InvalidArgument("field rows must equal vertex count");
  if (components_.size() == 1) return sf_apply(trees_[0], f_, field, &caches_[0]);
  VertexField out(field.rows(), field.cols());
  for (std::size_t c = 0; c < components_.size(); ++c) {
    const std::vector<int>& ids = components_[c];
    const Eigen::MatrixXd r = sf_apply(trees_[c], f_, gather(field, ids), &caches_[c]);
    for (std::size_t i = 0; i < ids.size(); ++i) out.row(ids[i]) = r.row(i);
  }
  return out;
}

}  // namespace gfi
