#include "gfi/trees.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>

#include "gfi/error.hpp"

namespace gfi {

std::vector<int> MetricTree::topological_order() const {
  const int t = num_nodes();
  std::vector<int> first_child(t, -1), next_sibling(t, -1);
  for (int v = t - 1; v >= 0; --v)
    if (parent[v] >= 0) {
      next_sibling[v] = first_child[parent[v]];
      first_child[parent[v]] = v;
    }
  std::vector<int> order;
  order.reserve(t);
  order.push_back(root);
  for (std::size_t i = 0; i < order.size(); ++i)
    for (int c = first_child[order[i]]; c >= 0; c = next_sibling[c]) order.push_back(c);
  if (static_cast<int>(order.size()) != t) throw InvalidArgument("tree is not connected");
  return order;
}

std::vector<double> tree_distances(const MetricTree& tree, int source) {
  const int t = tree.num_nodes();
  std::vector<std::vector<std::pair<int, double>>> adj(t);
  for (int v = 0; v < t; ++v)
    if (tree.parent[v] >= 0) {
      adj[v].push_back({tree.parent[v], tree.parent_weight[v]});
      adj[tree.parent[v]].push_back({v, tree.parent_weight[v]});
    }
  std::vector<double> d(t, kInfinity);
  std::vector<int> stack{tree.leaf_map[source]};
  d[stack[0]] = 0.0;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (auto [v, w] : adj[u])
      if (d[v] == kInfinity) {
        d[v] = d[u] + w;
        stack.push_back(v);
      }
  }
  std::vector<double> out(tree.num_vertices());
  for (int v = 0; v < tree.num_vertices(); ++v) out[v] = d[tree.leaf_map[v]];
  return out;
}

namespace {

void require_connected(const WeightedGraph& graph) {
  if (graph.num_vertices() == 0) throw InvalidArgument("graph has no vertices");
  if (!is_connected(graph)) throw InvalidArgument("tree embedding needs a connected graph");
}

MetricTree tree_from_edges(int n, const std::vector<Edge>& edges, int root) {
  std::vector<std::vector<std::pair<int, double>>> adj(n);
  for (const Edge& e : edges) {
    adj[e.u].push_back({e.v, e.weight});
    adj[e.v].push_back({e.u, e.weight});
  }
  MetricTree tree;
  tree.parent.assign(n, -1);
  tree.parent_weight.assign(n, 0.0);
  tree.leaf_map.resize(n);
  std::iota(tree.leaf_map.begin(), tree.leaf_map.end(), 0);
  tree.root = root;
  std::vector<char> seen(n, 0);
  std::vector<int> stack{root};
  seen[root] = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (auto [v, w] : adj[u])
      if (!seen[v]) {
        seen[v] = 1;
        tree.parent[v] = u;
        tree.parent_weight[v] = w;
        stack.push_back(v);
      }
  }
  return tree;
}

struct DisjointSets {
  std::vector<int> p;
  explicit DisjointSets(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    p[a] = b;
    return true;
  }
};

}  // namespace

MetricTree mst(const WeightedGraph& graph) {
  require_connected(graph);
  std::vector<Edge> edges = graph.edges();
  std::stable_sort(edges.begin(), edges.end(),
                   [](const Edge& x, const Edge& y) { return x.weight < y.weight; });
  DisjointSets sets(graph.num_vertices());
  std::vector<Edge> kept;
  for (const Edge& e : edges)
    if (sets.unite(e.u, e.v)) kept.push_back(e);
  return tree_from_edges(graph.num_vertices(), kept, 0);
}

namespace {

struct BartalBuilder {
  const WeightedGraph& graph;
  Rng& rng;
  MetricTree& tree;
  double log_n;
  std::vector<int> owner;     // cluster stamp per vertex
  std::vector<char> covered;
  std::vector<double> dist;
  int stamp = 0;

  // Splits `cluster` (centered at members[0]) at scale delta and recurses.
  void split(std::vector<int> cluster, double delta) {
    if (cluster.size() <= 1) return;
    const int center = cluster.front();
    const int id = ++stamp;
    for (int v : cluster) {
      owner[v] = id;
      covered[v] = 0;
    }
    std::vector<int> order(cluster.begin() + 1, cluster.end());
    std::shuffle(order.begin(), order.end(), rng);
    order.insert(order.begin(), center);

    std::exponential_distribution<double> radius_dist(4.0 * log_n / delta);
    std::vector<std::vector<int>> parts;
    for (int u : order) {
      if (covered[u]) continue;
      const double radius = std::min(delta / 4.0, radius_dist(rng));
      std::vector<int> ball = grow(u, radius, id);
      for (int v : ball) covered[v] = 1;
      parts.push_back(std::move(ball));
    }
    for (auto& part : parts) {
      if (part.front() != center) {
        tree.parent[part.front()] = center;
        tree.parent_weight[part.front()] = delta;
      }
    }
    for (auto& part : parts) split(std::move(part), delta / 2.0);
  }

  // Dijkstra from u over uncovered vertices of the current cluster, up to radius.
  std::vector<int> grow(int u, double radius, int id) {
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    std::vector<int> ball, touched{u};
    dist[u] = 0.0;
    heap.push({0.0, u});
    while (!heap.empty()) {
      auto [d, x] = heap.top();
      heap.pop();
      if (d > dist[x]) continue;
      if (d > radius) break;
      if (covered[x] == 2) continue;
      covered[x] = 2;
      ball.push_back(x);
      auto nbrs = graph.neighbors(x);
      auto ws = graph.weights(x);
      for (std::size_t k = 0; k < nbrs.size(); ++k) {
        const int y = nbrs[k];
        if (owner[y] != id || covered[y]) continue;
        const double nd = d + ws[k];
        if (nd < dist[y]) {
          if (dist[y] == kInfinity) touched.push_back(y);
          dist[y] = nd;
          heap.push({nd, y});
        }
      }
    }
    for (int x : touched) dist[x] = kInfinity;
    for (int x : ball) covered[x] = 0;
    return ball;
  }
};

}  // namespace

MetricTree bartal_tree(const WeightedGraph& graph, Rng& rng) {
  require_connected(graph);
  const int n = graph.num_vertices();
  MetricTree tree;
  tree.parent.assign(n, -1);
  tree.parent_weight.assign(n, 0.0);
  tree.leaf_map.resize(n);
  std::iota(tree.leaf_map.begin(), tree.leaf_map.end(), 0);
  tree.root = uniform_index(n, rng);
  if (n == 1) return tree;

  BartalBuilder b{graph, rng, tree, std::log(std::max(2, n)), std::vector<int>(n, 0),
                  std::vector<char>(n, 0), std::vector<double>(n, kInfinity)};
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);
  std::swap(all[0], all[tree.root]);
  const double delta = std::max(diameter_upper_bound(graph, tree.root), graph.min_positive_weight());
  b.split(std::move(all), delta);
  return tree;
}

MetricTree frt_tree(const WeightedGraph& graph, Rng& rng) {
  require_connected(graph);
  const int n = graph.num_vertices();
  MetricTree tree;
  tree.leaf_map.resize(n);
  std::iota(tree.leaf_map.begin(), tree.leaf_map.end(), 0);
  if (n == 1) {
    tree.parent = {-1};
    tree.parent_weight = {0.0};
    tree.root = 0;
    return tree;
  }

  // Work in units of the smallest edge so distinct vertices sit at distance >= 1.
  const double unit = graph.min_positive_weight();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  const double beta = std::uniform_real_distribution<double>(1.0, 2.0)(rng);
  const double diameter = diameter_upper_bound(graph, 0) / unit;
  const int top = std::max(1, static_cast<int>(std::ceil(std::log2(std::max(diameter, 1.0)))) + 1);

  // Least-element lists: (center, distance) in permutation order, distances decreasing.
  std::vector<std::vector<std::pair<int, double>>> lists(n);
  std::vector<double> best(n, kInfinity), dist(n, kInfinity);
  using Item = std::pair<double, int>;
  for (int c : perm) {
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    std::vector<int> touched{c};
    dist[c] = 0.0;
    heap.push({0.0, c});
    while (!heap.empty()) {
      auto [d, x] = heap.top();
      heap.pop();
      if (d > dist[x] || d >= best[x]) continue;
      best[x] = d;
      lists[x].push_back({c, d / unit});
      auto nbrs = graph.neighbors(x);
      auto ws = graph.weights(x);
      for (std::size_t k = 0; k < nbrs.size(); ++k) {
        const double nd = d + ws[k];
        const int y = nbrs[k];
        if (nd < dist[y] && nd < best[y]) {
          if (dist[y] == kInfinity) touched.push_back(y);
          dist[y] = nd;
          heap.push({nd, y});
        }
      }
    }
    for (int x : touched) dist[x] = kInfinity;
  }
  auto center_at = [&](int v, double r) {
    for (auto [c, d] : lists[v])
      if (d <= r) return c;
    return v;
  };

  // Nodes 0..n-1 are the level-0 leaves; clusters are appended top-down.
  tree.parent.assign(n, -1);
  tree.parent_weight.assign(n, 0.0);
  auto add_node = [&](int parent, double weight) {
    tree.parent.push_back(parent);
    tree.parent_weight.push_back(weight);
    return static_cast<int>(tree.parent.size()) - 1;
  };
  tree.root = add_node(-1, 0.0);
  std::vector<int> node(n, tree.root);
  for (int level = top - 1; level >= 1; --level) {
    const double r = beta * std::ldexp(1.0, level - 1);
    const double w = beta * std::ldexp(1.0, level) * unit;
    std::map<std::pair<int, int>, int> clusters;
    for (int v = 0; v < n; ++v) {
      const auto key = std::make_pair(node[v], center_at(v, r));
      auto it = clusters.find(key);
      if (it == clusters.end()) it = clusters.emplace(key, add_node(node[v], w)).first;
      node[v] = it->second;
    }
  }
  for (int v = 0; v < n; ++v) {
    tree.parent[v] = node[v];
    tree.parent_weight[v] = beta * unit;
  }
  return tree;
}

VertexField tree_integrate_expsum(const MetricTree& tree, const std::vector<ExpTerm>& terms,
                                  const VertexField& field) {
  const int n = tree.num_vertices();
  if (field.rows() != n) throw InvalidArgument("field rows must equal vertex count");
  const int t = tree.num_nodes();
  const Eigen::Index cols = field.cols();
  const std::vector<int> order = tree.topological_order();

  Eigen::MatrixXcd f = Eigen::MatrixXcd::Zero(t, cols);
  for (int v = 0; v < n; ++v) f.row(tree.leaf_map[v]) += field.row(v).cast<std::complex<double>>();

  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, cols);
  Eigen::MatrixXcd down(t, cols), up(t, cols);
  std::vector<std::complex<double>> edge(t);
  for (const ExpTerm& term : terms) {
    for (int v = 0; v < t; ++v) edge[v] = tree.parent[v] >= 0 ? std::exp(term.c * tree.parent_weight[v]) : 0.0;
    down = f;
    for (auto it = order.rbegin(); it != order.rend(); ++it)
      if (tree.parent[*it] >= 0) down.row(tree.parent[*it]) += edge[*it] * down.row(*it);
    up.row(tree.root).setZero();
    for (int v : order) {
      const int p = tree.parent[v];
      if (p < 0) continue;
      up.row(v) = edge[v] * (up.row(p) + down.row(p) - edge[v] * down.row(v));
    }
    for (int v = 0; v < n; ++v) {
      const int x = tree.leaf_map[v];
      out.row(v) += (term.a * (down.row(x) + up.row(x))).real();
    }
  }
  return out;
}

VertexField ensemble_integrate(const std::vector<MetricTree>& trees, const std::vector<ExpTerm>& terms,
                               const VertexField& field) {
  if (trees.empty()) throw InvalidArgument("ensemble needs at least one tree");
  VertexField out = VertexField::Zero(field.rows(), field.cols());
  for (const MetricTree& t : trees) {
    if (t.num_vertices() != trees.front().num_vertices())
      throw InvalidArgument("ensemble trees cover different vertex sets");
    out += tree_integrate_expsum(t, terms, field);
  }
  return out / static_cast<double>(trees.size());
}

TreeEnsembleIntegrator::TreeEnsembleIntegrator(const WeightedGraph& graph, TreeKind kind, int k,
                                               double lambda, std::uint64_t seed)
    : n_(graph.num_vertices()), kind_(kind), terms_{{1.0, -lambda}} {
  if (k < 1) throw InvalidArgument("tree count must be at least 1");
  const auto start = std::chrono::steady_clock::now();
  if (kind == TreeKind::kMst) k = 1;
  for (int i = 0; i < k; ++i) {
    Rng rng(split_seed(seed, i));
    switch (kind) {
      case TreeKind::kMst: trees_.push_back(mst(graph)); break;
      case TreeKind::kBartal: trees_.push_back(bartal_tree(graph, rng)); break;
      case TreeKind::kFrt: trees_.push_back(frt_tree(graph, rng)); break;
    }
  }
  preprocess_ms_ =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

VertexField TreeEnsembleIntegrator::apply(const VertexField& field) const {
  return ensemble_integrate(trees_, terms_, field);
}

std::string TreeEnsembleIntegrator::name() const {
  switch (kind_) {
    case TreeKind::kMst: return "tree-mst";
    case TreeKind::kBartal: return "tree-bartal-" + std::to_string(trees_.size());
    case TreeKind::kFrt: return "tree-frt-" + std::to_string(trees_.size());
  }
  return "tree";
}

}  // namespace gfi
