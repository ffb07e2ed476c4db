#include "gfi/dense_oracle.hpp"

#include <cmath>

#include <lapacke.h>

#include "gfi/error.hpp"

namespace gfi {

BruteForceResult bf_shortest_path_integrate(const WeightedGraph& graph, const ScalarKernelFn& f,
                                            const VertexField& field) {
  const int n = graph.num_vertices();
  if (field.rows() != n) throw InvalidArgument("field rows must equal vertex count");
  BruteForceResult result{VertexField::Zero(n, field.cols()), !is_connected(graph)};
  for (int w = 0; w < n; ++w) {
    const std::vector<double> d = sssp(graph, w);
    for (int v = 0; v < n; ++v)
      if (d[v] < kInfinity) result.field.row(v) += f(d[v]) * field.row(w);
  }
  return result;
}

Eigen::MatrixXd shortest_path_kernel_matrix(const WeightedGraph& graph, const ScalarKernelFn& f) {
  const int n = graph.num_vertices();
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
  for (int w = 0; w < n; ++w) {
    const std::vector<double> d = sssp(graph, w);
    for (int v = 0; v < n; ++v)
      if (d[v] < kInfinity) k(v, w) = f(d[v]);
  }
  return k;
}

Eigen::MatrixXd diffusion_weight_matrix(const PointCloud& cloud, double epsilon, WeightMode mode) {
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
  const int n = cloud.size();
  if (n > kDenseDiffusionLimit)
    throw InvalidArgument("dense diffusion limited to " + std::to_string(kDenseDiffusionLimit) +
                          " points");
  const Points& p = cloud.points();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < j; ++i) {
      const double d = (p.row(i) - p.row(j)).cwiseAbs().sum();
      if (d <= epsilon) {
        const double value = mode == WeightMode::kBinary ? 1.0 : d;
        w(i, j) = value;
        w(j, i) = value;
      }
    }
    if (mode == WeightMode::kBinary) w(j, j) = 1.0;
  }
  return w;
}

VertexField bf_diffusion_integrate(const PointCloud& cloud, const DiffusionSpec& spec,
                                   const VertexField& field) {
  if (field.rows() != cloud.size()) throw InvalidArgument("field rows must equal point count");
  if (spec.lambda == 0.0) return field;
  return dense_symmetric_expm_apply(diffusion_weight_matrix(cloud, spec.epsilon, spec.mode),
                                    spec.lambda, field);
}

SymmetricEigen symmetric_eigen(Eigen::MatrixXd&& w) {
  if (w.rows() != w.cols()) throw InvalidArgument("matrix must be square");
  const int n = static_cast<int>(w.rows());
  SymmetricEigen out{Eigen::VectorXd(n), std::move(w)};
  if (n == 0) return out;
  const Eigen::MatrixXd& a = out.vectors;
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  for (int j = 0; j < n; ++j)
    for (int i = j + 1; i < n; ++i)
      if (std::abs(a(i, j) - a(j, i)) > 1e-10 * scale) throw InvalidArgument("matrix is not symmetric");
  // Column-major storage; the lower triangle is read.
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, out.vectors.data(), n,
                                         out.values.data());
  if (info != 0) throw NumericalError("dsyevd failed with info " + std::to_string(info));
  return out;
}

SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& w) { return symmetric_eigen(Eigen::MatrixXd(w)); }

SymmetricExpmOperator::SymmetricExpmOperator(Eigen::MatrixXd w, double lambda) {
  SymmetricEigen e = symmetric_eigen(std::move(w));
  q_ = std::move(e.vectors);
  scale_ = (lambda * e.values.array()).exp().matrix();
  if (!scale_.allFinite()) throw NumericalError("exp(lambda W) overflows");
}

Eigen::MatrixXd SymmetricExpmOperator::apply(const Eigen::MatrixXd& x) const {
  if (x.rows() != q_.rows()) throw InvalidArgument("operand rows must equal matrix size");
  Eigen::MatrixXd y = q_.transpose() * x;
  y = scale_.asDiagonal() * y;
  return q_ * y;
}

Eigen::MatrixXd dense_symmetric_expm_apply(const Eigen::MatrixXd& w, double lambda,
                                           const Eigen::MatrixXd& x) {
  if (x.rows() != w.rows()) throw InvalidArgument("operand rows must equal matrix size");
  return SymmetricExpmOperator(w, lambda).apply(x);
}

}  // namespace gfi

#include <chrono>

namespace gfi {

namespace {
double ms_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}
}  // namespace

DenseMatrixIntegrator::DenseMatrixIntegrator(Eigen::MatrixXd matrix, std::string name)
    : k_(std::move(matrix)), name_(std::move(name)) {
  if (k_.rows() != k_.cols()) throw InvalidArgument("kernel matrix must be square");
}

VertexField DenseMatrixIntegrator::apply(const VertexField& field) const {
  if (field.rows() != k_.cols()) throw InvalidArgument("field rows must equal matrix size");
  return k_ * field;
}

std::unique_ptr<DenseMatrixIntegrator> DenseMatrixIntegrator::shortest_path(const WeightedGraph& graph,
                                                             const ScalarKernelFn& f) {
  const auto start = std::chrono::steady_clock::now();
  auto out = std::make_unique<DenseMatrixIntegrator>(shortest_path_kernel_matrix(graph, f), "bf");
  out->preprocess_ms_ = ms_since(start);
  return out;
}

BFDiffusionIntegrator::BFDiffusionIntegrator(const PointCloud& cloud, const DiffusionSpec& spec) {
  const auto start = std::chrono::steady_clock::now();
  op_.emplace(diffusion_weight_matrix(cloud, spec.epsilon, spec.mode), spec.lambda);
  preprocess_ms_ = ms_since(start);
}

VertexField BFDiffusionIntegrator::apply(const VertexField& field) const { return op_->apply(field); }

}  // namespace gfi
