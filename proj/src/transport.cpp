#include "gfi/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gfi/dense_oracle.hpp"
#include "gfi/error.hpp"

namespace gfi {

FMHandle::FMHandle(std::shared_ptr<const FieldIntegrator> integrator)
    : integrator_(std::move(integrator)) {
  if (!integrator_) throw InvalidArgument("handle needs an integrator");
}

Eigen::MatrixXd FMHandle::apply(const Eigen::MatrixXd& x) const {
  if (x.rows() != size()) throw InvalidArgument("operand rows must equal handle size");
  return integrator_->apply(x);
}

FMHandle dense_handle(Eigen::MatrixXd c) {
  return FMHandle(std::make_shared<DenseMatrixIntegrator>(std::move(c)));
}

namespace {

constexpr double kFloor = 1e-30;

void check_finite(const Eigen::MatrixXd& x, int iteration, const char* what) {
  if (!x.allFinite())
    throw NumericalError(std::string("non-finite ") + what + " at iteration " + std::to_string(iteration));
}

double inner(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) { return (x.array() * y.array()).sum(); }

}  // namespace

BarycenterResult wasserstein_barycenter(const FMHandle& fm, const std::vector<Eigen::VectorXd>& inputs,
                                        const Eigen::VectorXd& area, const Eigen::VectorXd& alpha,
                                        const BarycenterOptions& options) {
  const int n = fm.size();
  const int k = static_cast<int>(inputs.size());
  if (k < 1) throw InvalidArgument("barycenter needs at least one input");
  if (alpha.size() != k) throw InvalidArgument("one weight per input required");
  if ((alpha.array() <= 0.0).any() || std::abs(alpha.sum() - 1.0) > 1e-9)
    throw InvalidArgument("weights must be positive and sum to 1");
  if (area.size() != n || (area.array() <= 0.0).any()) throw InvalidArgument("area weights must be positive");

  Eigen::MatrixXd targets(n, k);
  for (int i = 0; i < k; ++i) {
    if (inputs[i].size() != n) throw InvalidArgument("input distribution has wrong length");
    targets.col(i) = inputs[i];
  }
  Eigen::MatrixXd v = Eigen::MatrixXd::Ones(n, k);
  Eigen::VectorXd mu = Eigen::VectorXd::Ones(n), previous;
  BarycenterResult result;
  for (int it = 1; it <= options.max_iter; ++it) {
    Eigen::MatrixXd kv = fm.apply(area.asDiagonal() * v).cwiseMax(kFloor);
    const Eigen::MatrixXd w = targets.cwiseQuotient(kv);
    check_finite(w, it, "scaling w");
    Eigen::MatrixXd d = v.cwiseProduct(fm.apply(area.asDiagonal() * w)).cwiseMax(kFloor);
    check_finite(d, it, "scaling d");
    Eigen::VectorXd log_mu = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < k; ++i) log_mu += alpha[i] * d.col(i).array().log().matrix();
    mu = log_mu.array().exp().matrix();
    for (int i = 0; i < k; ++i) v.col(i) = v.col(i).cwiseProduct(mu).cwiseQuotient(d.col(i));
    check_finite(v, it, "scaling v");
    check_finite(mu, it, "barycenter");

    const double mass = area.dot(mu);
    if (!(mass > 0.0) || !std::isfinite(mass))
      throw NumericalError("barycenter mass vanished at iteration " + std::to_string(it));
    Eigen::VectorXd normalized = mu / mass;
    result.iterations = it;
    if (previous.size() == n && (normalized - previous).lpNorm<1>() < options.tol) {
      previous = std::move(normalized);
      result.converged = true;
      break;
    }
    previous = std::move(normalized);
  }
  result.mu = std::move(previous);
  return result;
}

Eigen::VectorXd hadamard_square_apply(const FMHandle& fm, const Eigen::VectorXd& p) {
  const int n = fm.size();
  if (p.size() != n) throw InvalidArgument("vector length must equal handle size");
  constexpr int kBlock = 256;
  Eigen::VectorXd out(n);
  for (int start = 0; start < n; start += kBlock) {
    const int width = std::min(kBlock, n - start);
    Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, width);
    for (int j = 0; j < width; ++j) e(start + j, j) = 1.0;
    const Eigen::MatrixXd y = fm.apply(e);
    out.segment(start, width) = (p.asDiagonal() * y.cwiseAbs2()).colwise().sum().transpose();
  }
  return out;
}

Eigen::MatrixXd gw_constant(const FMHandle& c, const FMHandle& d, const Eigen::VectorXd& p,
                            const Eigen::VectorXd& q) {
  const Eigen::VectorXd w1 = hadamard_square_apply(c, p);
  const Eigen::VectorXd w2 = hadamard_square_apply(d, q);
  return w1 * Eigen::RowVectorXd::Ones(q.size()) + Eigen::VectorXd::Ones(p.size()) * w2.transpose();
}

Eigen::MatrixXd sandwich(const FMHandle& c, const FMHandle& d, const Eigen::MatrixXd& t) {
  if (t.rows() != c.size() || t.cols() != d.size()) throw InvalidArgument("coupling shape mismatch");
  const Eigen::MatrixXd ct = c.apply(t);
  return d.apply(ct.transpose()).transpose();
}

Eigen::MatrixXd tensor_product(const FMHandle& c, const FMHandle& d, const Eigen::MatrixXd& t,
                               const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  if (p.size() != t.rows() || q.size() != t.cols()) throw InvalidArgument("marginal length mismatch");
  return gw_constant(c, d, p, q) - 2.0 * sandwich(c, d, t);
}

double gw_cost(const FMHandle& c, const FMHandle& d, const Eigen::MatrixXd& t, const Eigen::VectorXd& p,
               const Eigen::VectorXd& q) {
  return inner(tensor_product(c, d, t, p, q), t);
}

double quadratic_step(double a, double b) {
  if (a > 0.0) return std::min(1.0, std::max(0.0, -b / (2.0 * a)));
  if (a + b < 0.0) return 1.0;
  return 0.0;
}

namespace {

LineSearchResult step_from_products(double alpha, const Eigen::MatrixXd& g, const Eigen::MatrixXd& dg,
                                    const Eigen::MatrixXd& m, const Eigen::MatrixXd& constant,
                                    const Eigen::MatrixXd& cgd, const Eigen::MatrixXd& cdgd) {
  LineSearchResult r;
  r.a = -2.0 * alpha * inner(cdgd, dg);
  r.b = alpha * inner(constant, dg) - 2.0 * alpha * (inner(cdgd, g) + inner(cgd, dg));
  if (m.size() > 0) r.b += (1.0 - alpha) * inner(m, dg);
  r.tau = quadratic_step(r.a, r.b);
  return r;
}

}  // namespace

LineSearchResult line_search(const FMHandle& c, const FMHandle& d, double alpha, const Eigen::MatrixXd& g,
                             const Eigen::MatrixXd& dg, const Eigen::MatrixXd& m,
                             const Eigen::MatrixXd& constant) {
  if (g.rows() != dg.rows() || g.cols() != dg.cols()) throw InvalidArgument("direction shape mismatch");
  return step_from_products(alpha, g, dg, m, constant, sandwich(c, d, g), sandwich(c, d, dg));
}

double line_search(const FMHandle& c, const FMHandle& d, double alpha, const Eigen::MatrixXd& g,
                   const Eigen::MatrixXd& dg, const Eigen::MatrixXd& m, const Eigen::VectorXd& p,
                   const Eigen::VectorXd& q) {
  return line_search(c, d, alpha, g, dg, m, gw_constant(c, d, p, q)).tau;
}

double marginal_error(const Eigen::MatrixXd& t, const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  const double rows = (t.rowwise().sum() - p).lpNorm<1>();
  const double cols = (t.colwise().sum().transpose() - q).lpNorm<1>();
  return std::max(rows, cols);
}

namespace {

// Altschuler-Weed-Rigollet rounding onto {T >= 0 : T 1 = p, T^T 1 = q}.
void round_to_polytope(Eigen::MatrixXd& t, const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  const Eigen::VectorXd r = t.rowwise().sum();
  for (Eigen::Index i = 0; i < t.rows(); ++i)
    if (r[i] > p[i]) t.row(i) *= p[i] / r[i];
  const Eigen::VectorXd c = t.colwise().sum().transpose();
  for (Eigen::Index j = 0; j < t.cols(); ++j)
    if (c[j] > q[j]) t.col(j) *= q[j] / c[j];
  const Eigen::VectorXd er = p - t.rowwise().sum();
  const Eigen::VectorXd ec = q - t.colwise().sum().transpose();
  const double mass = er.sum();
  if (mass > 0.0) t += er * ec.transpose() / mass;
}

// Scalings beyond this are absorbed into the dual potentials.
constexpr double kAbsorb = 1e50;

}  // namespace

Eigen::MatrixXd sinkhorn_linear_ot(const Eigen::MatrixXd& cost, const Eigen::VectorXd& p,
                                   const Eigen::VectorXd& q, double reg, int iters) {
  const Eigen::Index n = cost.rows(), m = cost.cols();
  if (p.size() != n || q.size() != m) throw InvalidArgument("marginal length mismatch");
  if (!(reg > 0.0)) throw InvalidArgument("regularization must be positive");
  if (!cost.allFinite()) throw NumericalError("non-finite cost entries");

  // Potentials start at row minima / column minima so every row and column
  // of the kernel holds an entry equal to 1.
  Eigen::VectorXd f = cost.rowwise().minCoeff();
  Eigen::VectorXd g = (cost.colwise() - f).colwise().minCoeff().transpose();
  auto kernel = [&] {
    Eigen::MatrixXd e = cost;
    e.colwise() -= f;
    e.rowwise() -= g.transpose();
    return Eigen::MatrixXd((-e / reg).array().exp().matrix());
  };
  Eigen::MatrixXd k = kernel();
  Eigen::VectorXd u = Eigen::VectorXd::Ones(n), v = Eigen::VectorXd::Ones(m);
  for (int it = 0; it < iters; ++it) {
    u = p.cwiseQuotient((k * v).cwiseMax(1e-300));
    v = q.cwiseQuotient((k.transpose() * u).cwiseMax(1e-300));
    if (u.maxCoeff() > kAbsorb || v.maxCoeff() > kAbsorb || (it + 1) % 50 == 0) {
      for (Eigen::Index i = 0; i < n; ++i)
        if (u[i] > 0.0) f[i] += reg * std::log(u[i]);
      for (Eigen::Index j = 0; j < m; ++j)
        if (v[j] > 0.0) g[j] += reg * std::log(v[j]);
      k = kernel();
      for (Eigen::Index i = 0; i < n; ++i)
        if (p[i] == 0.0) k.row(i).setZero();
      for (Eigen::Index j = 0; j < m; ++j)
        if (q[j] == 0.0) k.col(j).setZero();
      u.setOnes();
      v.setOnes();
      if ((k.rowwise().sum() - p).lpNorm<1>() < 1e-12) break;
    }
  }
  Eigen::MatrixXd t = u.asDiagonal() * k * v.asDiagonal();
  if (!t.allFinite()) throw NumericalError("Sinkhorn produced non-finite coupling");
  round_to_polytope(t, p, q);
  return t;
}

GWResult gw_conditional_gradient(const FMHandle& c, const FMHandle& d, const Eigen::VectorXd& p,
                                 const Eigen::VectorXd& q, double alpha, const Eigen::MatrixXd& m,
                                 const GWOptions& options) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("alpha must lie in (0, 1]");
  if (p.size() != c.size() || q.size() != d.size()) throw InvalidArgument("marginal length mismatch");
  if (m.size() > 0 && (m.rows() != p.size() || m.cols() != q.size()))
    throw InvalidArgument("feature cost shape mismatch");

  const Eigen::MatrixXd constant = gw_constant(c, d, p, q);
  GWResult r;
  r.coupling = p * q.transpose();
  Eigen::MatrixXd ctd = sandwich(c, d, r.coupling);
  auto objective = [&](const Eigen::MatrixXd& t, const Eigen::MatrixXd& product) {
    double value = alpha * inner(constant - 2.0 * product, t);
    if (m.size() > 0) value += (1.0 - alpha) * inner(m, t);
    return value;
  };
  r.cost = objective(r.coupling, ctd);
  r.max_marginal_error = marginal_error(r.coupling, p, q);

  for (int it = 1; it <= options.max_iter; ++it) {
    Eigen::MatrixXd grad = 2.0 * alpha * (constant - 2.0 * ctd);
    if (m.size() > 0) grad += (1.0 - alpha) * m;
    const double scale = grad.cwiseAbs().mean();
    const double reg = options.reg > 0.0 ? options.reg : 0.005 * (scale > 0.0 ? scale : 1.0);
    const Eigen::MatrixXd target = sinkhorn_linear_ot(grad, p, q, reg, options.sinkhorn_iters);
    const Eigen::MatrixXd dg = target - r.coupling;
    const Eigen::MatrixXd cdgd = sandwich(c, d, dg);
    const LineSearchResult step = step_from_products(alpha, r.coupling, dg, m, constant, ctd, cdgd);
    r.coupling += step.tau * dg;
    ctd += step.tau * cdgd;
    const double cost = objective(r.coupling, ctd);
    r.iterations = it;
    r.costs.push_back(cost);
    r.max_marginal_error = std::max(r.max_marginal_error, marginal_error(r.coupling, p, q));
    const double change = std::abs(cost - r.cost);
    r.cost = cost;
    if (change < options.tol) break;
  }
  return r;
}

}  // namespace gfi
