#pragma once

#include <Eigen/Dense>

#include "gfi/kernel.hpp"

namespace gfi {

/// H[i, j] = h[i + j] for 0 <= i, j < D, stored as its 2D - 1 anti-diagonals.
struct HankelSpec {
  Eigen::VectorXd h;
  int size() const { return static_cast<int>((h.size() + 1) / 2); }
};

/// h[t] = f(unit * t + offset), t = 0 .. 2D - 2.
HankelSpec build_kernel_sequence(const ScalarKernelFn& f, double unit, int d, double offset = 0.0);

/// H z via zero-padded FFT convolution. z may have several columns.
Eigen::MatrixXd hankel_matvec(const HankelSpec& spec, const Eigen::MatrixXd& z);

/// H z for h[t] = beta * rho^t, using H = beta g g^T with g[l] = rho^l.
Eigen::MatrixXd geometric_hankel_matvec(double rho, double beta, int d, const Eigen::MatrixXd& z);

}  // namespace gfi
