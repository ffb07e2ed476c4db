// Independent reference implementations used only by the tests.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "gfi/graph.hpp"
#include "gfi/random.hpp"
#include "gfi/trees.hpp"

namespace oracle {

/// exp(lambda W) by scaling and squaring a truncated Taylor series.
inline Eigen::MatrixXd taylor_expm(const Eigen::MatrixXd& w, double lambda, int terms = 60) {
  Eigen::MatrixXd a = lambda * w;
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  while (norm / std::ldexp(1.0, squarings) > 0.5) ++squarings;
  a /= std::ldexp(1.0, squarings);
  const Eigen::Index n = w.rows();
  Eigen::MatrixXd sum = Eigen::MatrixXd::Identity(n, n), term = sum;
  for (int k = 1; k <= terms; ++k) {
    term = term * a / k;
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

/// Floyd-Warshall all-pairs distances.
inline Eigen::MatrixXd floyd_warshall(const gfi::WeightedGraph& g) {
  const int n = g.num_vertices();
  Eigen::MatrixXd d = Eigen::MatrixXd::Constant(n, n, gfi::kInfinity);
  for (int v = 0; v < n; ++v) {
    d(v, v) = 0.0;
    auto nb = g.neighbors(v);
    auto ws = g.weights(v);
    for (std::size_t k = 0; k < nb.size(); ++k) d(v, nb[k]) = std::min(d(v, nb[k]), ws[k]);
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) d(i, j) = std::min(d(i, j), d(i, k) + d(k, j));
  return d;
}

/// sum_w f(d(w, v)) F(w) as an explicit double loop over a distance matrix.
inline Eigen::MatrixXd double_loop(const Eigen::MatrixXd& dist, const std::function<double(double)>& f,
                                   const Eigen::MatrixXd& field) {
  const Eigen::Index n = dist.rows();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, field.cols());
  for (Eigen::Index v = 0; v < n; ++v)
    for (Eigen::Index w = 0; w < n; ++w)
      if (std::isfinite(dist(w, v))) out.row(v) += f(dist(w, v)) * field.row(w);
  return out;
}

inline Eigen::VectorXd naive_hankel(const Eigen::VectorXd& h, const Eigen::VectorXd& z) {
  const Eigen::Index d = z.size();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) out[i] += h[i + j] * z[j];
  return out;
}

/// sum_{i,j,k,l} (C_ik - D_jl)^2 T_ij T_kl
inline double gw_quadruple_loop(const Eigen::MatrixXd& c, const Eigen::MatrixXd& d, const Eigen::MatrixXd& t) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < c.rows(); ++i)
    for (Eigen::Index j = 0; j < d.rows(); ++j)
      for (Eigen::Index k = 0; k < c.rows(); ++k)
        for (Eigen::Index l = 0; l < d.rows(); ++l) {
          const double diff = c(i, k) - d(j, l);
          total += diff * diff * t(i, j) * t(k, l);
        }
  return total;
}

/// L_ij = sum_{k,l} (C_ik - D_jl)^2 T_kl
inline Eigen::MatrixXd dense_tensor_product(const Eigen::MatrixXd& c, const Eigen::MatrixXd& d,
                                            const Eigen::MatrixXd& t) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(c.rows(), d.rows());
  for (Eigen::Index i = 0; i < c.rows(); ++i)
    for (Eigen::Index j = 0; j < d.rows(); ++j)
      for (Eigen::Index k = 0; k < c.rows(); ++k)
        for (Eigen::Index l = 0; l < d.rows(); ++l) {
          const double diff = c(i, k) - d(j, l);
          out(i, j) += diff * diff * t(k, l);
        }
  return out;
}

/// Optimal value of the transport LP by enumerating basic solutions: every
/// vertex of the polytope has at most n + m - 1 nonzero cells.
inline double lp_vertex_enumeration(const Eigen::MatrixXd& cost, const Eigen::VectorXd& p,
                                    const Eigen::VectorXd& q) {
  const int n = static_cast<int>(cost.rows()), m = static_cast<int>(cost.cols());
  const int cells = n * m, basis = n + m - 1;
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> pick(cells, 0);
  std::fill(pick.end() - basis, pick.end(), 1);
  do {
    std::vector<int> chosen;
    for (int c = 0; c < cells; ++c)
      if (pick[c]) chosen.push_back(c);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n + m, basis);
    Eigen::VectorXd rhs(n + m);
    rhs << p, q;
    for (int k = 0; k < basis; ++k) {
      a(chosen[k] / m, k) = 1.0;
      a(n + chosen[k] % m, k) = 1.0;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    if (qr.rank() < basis) continue;
    const Eigen::VectorXd x = qr.solve(rhs);
    if ((a * x - rhs).norm() > 1e-9 || x.minCoeff() < -1e-12) continue;
    double value = 0.0;
    for (int k = 0; k < basis; ++k) value += cost(chosen[k] / m, chosen[k] % m) * x[k];
    best = std::min(best, value);
  } while (std::next_permutation(pick.begin(), pick.end()));
  return best;
}

/// Prim's algorithm on a dense distance matrix of edge weights (inf = no edge).
inline double prim_mst_weight(const gfi::WeightedGraph& g) {
  const int n = g.num_vertices();
  std::vector<double> key(n, gfi::kInfinity);
  std::vector<char> in(n, 0);
  key[0] = 0.0;
  double total = 0.0;
  for (int it = 0; it < n; ++it) {
    int u = -1;
    for (int v = 0; v < n; ++v)
      if (!in[v] && (u < 0 || key[v] < key[u])) u = v;
    in[u] = 1;
    total += key[u];
    auto nb = g.neighbors(u);
    auto ws = g.weights(u);
    for (std::size_t k = 0; k < nb.size(); ++k)
      if (!in[nb[k]]) key[nb[k]] = std::min(key[nb[k]], ws[k]);
  }
  return total;
}

/// All-pairs path lengths between graph vertices of a tree, by walking each
/// vertex's ancestor chain.
inline Eigen::MatrixXd tree_all_pairs(const gfi::MetricTree& t) {
  const int n = t.num_vertices();
  std::vector<std::vector<std::pair<int, double>>> chain(n);
  for (int v = 0; v < n; ++v) {
    double acc = 0.0;
    for (int x = t.leaf_map[v]; x >= 0; x = t.parent[x]) {
      chain[v].push_back({x, acc});
      acc += t.parent_weight[x];
    }
  }
  Eigen::MatrixXd d(n, n);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      double best = gfi::kInfinity;
      for (auto [x, du] : chain[u])
        for (auto [y, dv] : chain[v])
          if (x == y) {
            best = std::min(best, du + dv);
            break;
          }
      d(u, v) = best;
    }
  return d;
}

/// Random connected graph: a random spanning tree plus extra edges.
inline gfi::WeightedGraph random_connected_graph(int n, int extra, gfi::Rng& rng, double wmin = 0.1,
                                                 double wmax = 2.0) {
  std::uniform_real_distribution<double> weight(wmin, wmax);
  std::vector<gfi::Edge> edges;
  for (int v = 1; v < n; ++v) edges.push_back({gfi::uniform_index(v, rng), v, weight(rng)});
  for (int k = 0; k < extra && n > 1; ++k) {
    const int a = gfi::uniform_index(n, rng), b = gfi::uniform_index(n, rng);
    if (a != b) edges.push_back({a, b, weight(rng)});
  }
  return gfi::WeightedGraph(n, edges);
}

inline gfi::WeightedGraph path_graph(int n, double w = 1.0) {
  std::vector<gfi::Edge> e;
  for (int v = 0; v + 1 < n; ++v) e.push_back({v, v + 1, w});
  return gfi::WeightedGraph(n, e);
}

inline gfi::WeightedGraph cycle_graph(int n, double w = 1.0) {
  std::vector<gfi::Edge> e;
  for (int v = 0; v < n; ++v) e.push_back({v, (v + 1) % n, w});
  return gfi::WeightedGraph(n, e);
}

inline gfi::WeightedGraph star_graph(int leaves, double w = 1.0) {
  std::vector<gfi::Edge> e;
  for (int v = 1; v <= leaves; ++v) e.push_back({0, v, w});
  return gfi::WeightedGraph(leaves + 1, e);
}

inline double rel_error(const Eigen::MatrixXd& got, const Eigen::MatrixXd& want) {
  const double scale = want.norm();
  return scale > 0.0 ? (got - want).norm() / scale : (got - want).norm();
}

}  // namespace oracle
