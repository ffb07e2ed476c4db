#include "gfi/graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

#include "gfi/error.hpp"

namespace gfi {

WeightedGraph::WeightedGraph(int num_vertices, std::span<const Edge> edges) {
  if (num_vertices < 0) throw InvalidArgument("negative vertex count");
  std::vector<Edge> directed;
  directed.reserve(2 * edges.size());
  for (const Edge& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= num_vertices || e.v >= num_vertices)
      throw InvalidArgument("edge endpoint out of range");
    if (e.u == e.v) throw InvalidArgument("self-loop at vertex " + std::to_string(e.u));
    if (!std::isfinite(e.weight) || e.weight < 0.0)
      throw InvalidArgument("edge weight must be finite and nonnegative");
    directed.push_back(e);
    directed.push_back({e.v, e.u, e.weight});
  }
  std::sort(directed.begin(), directed.end(), [](const Edge& a, const Edge& b) {
    if (a.u != b.u) return a.u < b.u;
    if (a.v != b.v) return a.v < b.v;
    return a.weight < b.weight;
  });
  offsets_.assign(num_vertices + 1, 0);
  targets_.reserve(directed.size());
  weights_.reserve(directed.size());
  for (std::size_t i = 0; i < directed.size(); ++i) {
    if (i > 0 && directed[i].u == directed[i - 1].u && directed[i].v == directed[i - 1].v) continue;
    targets_.push_back(directed[i].v);
    weights_.push_back(directed[i].weight);
    ++offsets_[directed[i].u + 1];
  }
  for (int v = 0; v < num_vertices; ++v) offsets_[v + 1] += offsets_[v];
}

std::vector<Edge> WeightedGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges());
  for (int u = 0; u < num_vertices(); ++u) {
    auto nb = neighbors(u);
    auto w = weights(u);
    for (std::size_t k = 0; k < nb.size(); ++k)
      if (u < nb[k]) out.push_back({u, nb[k], w[k]});
  }
  return out;
}

double WeightedGraph::min_positive_weight() const {
  double best = kInfinity;
  for (double w : weights_)
    if (w > 0.0) best = std::min(best, w);
  return best;
}

std::vector<double> sssp(const WeightedGraph& graph, std::span<const int> sources) {
  if (sources.empty()) throw InvalidArgument("sssp: empty source set");
  const int n = graph.num_vertices();
  std::vector<double> dist(n, kInfinity);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (int s : sources) {
    if (s < 0 || s >= n) throw InvalidArgument("sssp: source out of range");
    if (dist[s] != 0.0) {
      dist[s] = 0.0;
      heap.emplace(0.0, s);
    }
  }
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;
    auto nb = graph.neighbors(u);
    auto w = graph.weights(u);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      const double nd = d + w[k];
      if (nd < dist[nb[k]]) {
        dist[nb[k]] = nd;
        heap.emplace(nd, nb[k]);
      }
    }
  }
  return dist;
}

std::vector<double> sssp(const WeightedGraph& graph, int source) {
  return sssp(graph, std::span<const int>(&source, 1));
}

std::vector<int> bfs_levels(const WeightedGraph& graph, int root) {
  std::vector<int> level(graph.num_vertices(), -1);
  std::vector<int> frontier{root};
  level[root] = 0;
  for (std::size_t head = 0; head < frontier.size(); ++head) {
    const int u = frontier[head];
    for (int v : graph.neighbors(u)) {
      if (level[v] < 0) {
        level[v] = level[u] + 1;
        frontier.push_back(v);
      }
    }
  }
  return level;
}

std::vector<int> connected_components(const WeightedGraph& graph) {
  const int n = graph.num_vertices();
  std::vector<int> label(n, -1);
  std::vector<int> stack;
  int next = 0;
  for (int s = 0; s < n; ++s) {
    if (label[s] >= 0) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int v : graph.neighbors(u)) {
        if (label[v] < 0) {
          label[v] = next;
          stack.push_back(v);
        }
      }
    }
    ++next;
  }
  return label;
}

int count_components(std::span<const int> labels) {
  int m = -1;
  for (int l : labels) m = std::max(m, l);
  return m + 1;
}

bool is_connected(const WeightedGraph& graph) {
  if (graph.num_vertices() == 0) return true;
  return count_components(connected_components(graph)) == 1;
}

WeightedGraph induced_subgraph(const WeightedGraph& graph, std::span<const int> vertices) {
  std::vector<int> local(graph.num_vertices(), -1);
  for (std::size_t i = 0; i < vertices.size(); ++i) local[vertices[i]] = static_cast<int>(i);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const int u = vertices[i];
    auto nb = graph.neighbors(u);
    auto w = graph.weights(u);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      const int j = local[nb[k]];
      if (j > static_cast<int>(i)) edges.push_back({static_cast<int>(i), j, w[k]});
    }
  }
  return WeightedGraph(static_cast<int>(vertices.size()), edges);
}

double diameter_upper_bound(const WeightedGraph& graph, int start) {
  if (graph.num_vertices() <= 1) return 0.0;
  auto farthest = [&](int s) {
    auto d = sssp(graph, s);
    int arg = s;
    double best = 0.0;
    for (int v = 0; v < graph.num_vertices(); ++v)
      if (std::isfinite(d[v]) && d[v] > best) {
        best = d[v];
        arg = v;
      }
    return std::pair{arg, best};
  };
  const auto [far, unused] = farthest(start);
  const auto [far2, ecc] = farthest(far);
  return 2.0 * ecc;
}

}  // namespace gfi
