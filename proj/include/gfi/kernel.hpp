#pragma once

#include <variant>
#include <vector>

namespace gfi {

/// f(x) = exp(-lambda * x)
struct ExpKernel {
  double lambda = 1.0;
};

/// f sampled on the grid 0, unit, 2*unit, ...; nearest-grid lookup, constant
/// extrapolation past the last sample.
struct TabulatedKernel {
  double unit = 1.0;
  std::vector<double> samples;
};

/// Scalar function of a shortest-path distance, K(w, v) = f(dist(w, v)).
class ScalarKernelFn {
 public:
  ScalarKernelFn(ExpKernel k);
  ScalarKernelFn(TabulatedKernel k);

  static ScalarKernelFn exponential(double lambda) { return ExpKernel{lambda}; }
  static ScalarKernelFn tabulated(double unit, std::vector<double> samples) {
    return TabulatedKernel{unit, std::move(samples)};
  }

  double operator()(double x) const;

  bool is_exponential() const { return std::holds_alternative<ExpKernel>(fn_); }
  /// Decay rate; only meaningful when is_exponential().
  double decay() const;
  const std::variant<ExpKernel, TabulatedKernel>& variant() const { return fn_; }

 private:
  std::variant<ExpKernel, TabulatedKernel> fn_;
};

inline double kernel_eval(const ScalarKernelFn& f, double x) { return f(x); }

enum class WeightMode { kBinary, kDistance };

/// Parameters of the diffusion kernel exp(lambda * W) over an L1 epsilon-NN graph.
struct DiffusionSpec {
  double lambda = 1.0;
  double epsilon = 0.1;
  WeightMode mode = WeightMode::kBinary;
};

}  // namespace gfi
