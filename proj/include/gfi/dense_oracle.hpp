#pragma once

#include <Eigen/Dense>

#include "gfi/geometry.hpp"
#include "gfi/graph.hpp"
#include "gfi/kernel.hpp"

namespace gfi {

struct BruteForceResult {
  VertexField field;
  /// Set when the graph had more than one component; integration then runs
  /// independently inside each component.
  bool disconnected = false;
};

/// i(v) = sum_w f(dist(w, v)) F(w), one Dijkstra per source vertex.
BruteForceResult bf_shortest_path_integrate(const WeightedGraph& graph, const ScalarKernelFn& f,
                                            const VertexField& field);

/// Dense K(w, v) = f(dist(w, v)); zero across components.
Eigen::MatrixXd shortest_path_kernel_matrix(const WeightedGraph& graph, const ScalarKernelFn& f);

inline constexpr int kDenseDiffusionLimit = 20000;

/// L1 epsilon-NN weight matrix (binary: unit diagonal; distance: zero diagonal).
Eigen::MatrixXd diffusion_weight_matrix(const PointCloud& cloud, double epsilon, WeightMode mode);

/// exp(lambda * W) F with W from diffusion_weight_matrix. N <= kDenseDiffusionLimit.
VertexField bf_diffusion_integrate(const PointCloud& cloud, const DiffusionSpec& spec,
                                   const VertexField& field);

struct SymmetricEigen {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns
};

/// LAPACK divide-and-conquer eigendecomposition. Throws if W is not symmetric
/// to 1e-10 (relative to max |W|, floored at 1).
SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& w);
/// Consumes the matrix; avoids a copy for large inputs.
SymmetricEigen symmetric_eigen(Eigen::MatrixXd&& w);

/// exp(lambda W) X via W = Q D Q^T.
Eigen::MatrixXd dense_symmetric_expm_apply(const Eigen::MatrixXd& w, double lambda,
                                           const Eigen::MatrixXd& x);

/// Cached eigendecomposition for repeated exp(lambda W) applications.
class SymmetricExpmOperator {
 public:
  SymmetricExpmOperator(Eigen::MatrixXd w, double lambda);
  Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const;
  int size() const { return static_cast<int>(q_.rows()); }

 private:
  Eigen::MatrixXd q_;
  Eigen::VectorXd scale_;
};

}  // namespace gfi

#include <memory>
#include <optional>

#include "gfi/integrator.hpp"

namespace gfi {

/// Explicit N x N operator; apply is a dense product.
class DenseMatrixIntegrator : public FieldIntegrator {
 public:
  explicit DenseMatrixIntegrator(Eigen::MatrixXd matrix, std::string name = "dense");

  VertexField apply(const VertexField& field) const override;
  int num_vertices() const override { return static_cast<int>(k_.rows()); }
  std::string name() const override { return name_; }
  const Eigen::MatrixXd& matrix() const { return k_; }

  /// Brute-force shortest-path kernel, materialized once.
  static std::unique_ptr<DenseMatrixIntegrator> shortest_path(const WeightedGraph& graph,
                                                              const ScalarKernelFn& f);

 private:
  Eigen::MatrixXd k_;
  std::string name_;
};

/// Brute-force diffusion kernel through a cached eigendecomposition.
class BFDiffusionIntegrator : public FieldIntegrator {
 public:
  BFDiffusionIntegrator(const PointCloud& cloud, const DiffusionSpec& spec);

  VertexField apply(const VertexField& field) const override;
  int num_vertices() const override { return op_->size(); }
  std::string name() const override { return "bf-diffusion"; }

 private:
  std::optional<SymmetricExpmOperator> op_;
};

}  // namespace gfi
