#include "gfi/kernel.hpp"

#include <cmath>

#include "gfi/error.hpp"

namespace gfi {

ScalarKernelFn::ScalarKernelFn(ExpKernel k) : fn_(k) {
  if (!std::isfinite(k.lambda)) throw InvalidArgument("exponential kernel: non-finite decay");
}

ScalarKernelFn::ScalarKernelFn(TabulatedKernel k) : fn_(std::move(k)) {
  const auto& t = std::get<TabulatedKernel>(fn_);
  if (t.samples.empty()) throw InvalidArgument("tabulated kernel needs at least one sample");
  if (!(t.unit > 0.0)) throw InvalidArgument("tabulated kernel unit must be positive");
}

double ScalarKernelFn::operator()(double x) const {
  if (const auto* e = std::get_if<ExpKernel>(&fn_)) return std::exp(-e->lambda * x);
  const auto& t = std::get<TabulatedKernel>(fn_);
  const double pos = std::round(x / t.unit);
  if (pos >= static_cast<double>(t.samples.size() - 1)) return t.samples.back();
  return t.samples[static_cast<std::size_t>(std::max(pos, 0.0))];
}

double ScalarKernelFn::decay() const {
  if (const auto* e = std::get_if<ExpKernel>(&fn_)) return e->lambda;
  return 0.0;
}

}  // namespace gfi
