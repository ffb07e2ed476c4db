#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "gfi/integrator.hpp"

namespace gfi {

/// A field integrator standing in for a symmetric structure matrix C,
/// applied column by column.
class FMHandle {
 public:
  explicit FMHandle(std::shared_ptr<const FieldIntegrator> integrator);

  /// C X
  Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const;
  int size() const { return integrator_->num_vertices(); }
  const FieldIntegrator& integrator() const { return *integrator_; }

 private:
  std::shared_ptr<const FieldIntegrator> integrator_;
};

/// Wraps an explicit matrix.
FMHandle dense_handle(Eigen::MatrixXd c);

struct BarycenterOptions {
  int max_iter = 100;
  double tol = 1e-9;
};

struct BarycenterResult {
  Eigen::VectorXd mu;  // normalized so that <a, mu> = 1
  int iterations = 0;
  bool converged = false;
};

/// Entropic barycenter by alternating kernel scalings; mu is rebuilt from ones
/// at every outer iteration.
BarycenterResult wasserstein_barycenter(const FMHandle& fm, const std::vector<Eigen::VectorXd>& inputs,
                                        const Eigen::VectorXd& area, const Eigen::VectorXd& alpha,
                                        const BarycenterOptions& options = {});

/// diag(C D_p C), one block of unit columns at a time.
Eigen::VectorXd hadamard_square_apply(const FMHandle& fm, const Eigen::VectorXd& p);

/// (C.^2 p) 1^T + 1 (D.^2 q)^T, the coupling-independent part of the loss.
Eigen::MatrixXd gw_constant(const FMHandle& c, const FMHandle& d, const Eigen::VectorXd& p,
                            const Eigen::VectorXd& q);

/// C T D through the handles: (D (C T)^T)^T.
Eigen::MatrixXd sandwich(const FMHandle& c, const FMHandle& d, const Eigen::MatrixXd& t);

/// Squared-loss tensor product L(C, D, T) = constant - 2 C T D.
Eigen::MatrixXd tensor_product(const FMHandle& c, const FMHandle& d, const Eigen::MatrixXd& t,
                               const Eigen::VectorXd& p, const Eigen::VectorXd& q);

/// <L(C, D, T), T>
double gw_cost(const FMHandle& c, const FMHandle& d, const Eigen::MatrixXd& t, const Eigen::VectorXd& p,
               const Eigen::VectorXd& q);

/// Minimizer over [0, 1] of a tau^2 + b tau.
double quadratic_step(double a, double b);

struct LineSearchResult {
  double tau = 0.0;
  double a = 0.0;
  double b = 0.0;
};

/// Exact step for the (fused) GW objective along dG from G. `constant` is
/// gw_constant(c, d, p, q); M may be empty for pure GW.
LineSearchResult line_search(const FMHandle& c, const FMHandle& d, double alpha, const Eigen::MatrixXd& g,
                             const Eigen::MatrixXd& dg, const Eigen::MatrixXd& m,
                             const Eigen::MatrixXd& constant);
double line_search(const FMHandle& c, const FMHandle& d, double alpha, const Eigen::MatrixXd& g,
                   const Eigen::MatrixXd& dg, const Eigen::MatrixXd& m, const Eigen::VectorXd& p,
                   const Eigen::VectorXd& q);

/// Log-domain Sinkhorn on exp(-L / reg), then rounded onto the transport polytope.
Eigen::MatrixXd sinkhorn_linear_ot(const Eigen::MatrixXd& cost, const Eigen::VectorXd& p,
                                   const Eigen::VectorXd& q, double reg, int iters = 2000);

/// Largest of the row and column marginal L1 errors.
double marginal_error(const Eigen::MatrixXd& t, const Eigen::VectorXd& p, const Eigen::VectorXd& q);

struct GWOptions {
  int max_iter = 100;
  /// Inner entropic regularization; <= 0 selects 0.005 * mean |gradient|.
  double reg = 0.0;
  double tol = 1e-9;
  int sinkhorn_iters = 2000;
};

struct GWResult {
  Eigen::MatrixXd coupling;
  double cost = 0.0;
  int iterations = 0;
  std::vector<double> costs;        // after each iteration
  double max_marginal_error = 0.0;  // over all iterates
};

/// Conditional gradient for alpha * GW + (1 - alpha) <M, T>, starting at p q^T.
GWResult gw_conditional_gradient(const FMHandle& c, const FMHandle& d, const Eigen::VectorXd& p,
                                 const Eigen::VectorXd& q, double alpha, const Eigen::MatrixXd& m,
                                 const GWOptions& options = {});

}  // namespace gfi
