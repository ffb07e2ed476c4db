#include "gfi/hankel.hpp"

#include <complex>
#include <mutex>

#include <fftw3.h>

#include "gfi/error.hpp"

namespace gfi {

HankelSpec build_kernel_sequence(const ScalarKernelFn& f, double unit, int d, double offset) {
  if (!(unit > 0.0)) throw InvalidArgument("unit must be positive");
  if (d < 1) throw InvalidArgument("Hankel size must be at least 1");
  if (!(offset >= 0.0)) throw InvalidArgument("offset must be nonnegative");
  HankelSpec spec{Eigen::VectorXd(2 * d - 1)};
  for (int t = 0; t < 2 * d - 1; ++t) spec.h[t] = f(unit * t + offset);
  return spec;
}

namespace {

// FFTW's planner is not thread safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// Below this size the quadratic loop wins.
constexpr int kDirectLimit = 32;

Eigen::MatrixXd direct(const HankelSpec& spec, const Eigen::MatrixXd& z) {
  const int d = spec.size();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d, z.cols());
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out.row(i) += spec.h[i + j] * z.row(j);
  return out;
}

}  // namespace

Eigen::MatrixXd hankel_matvec(const HankelSpec& spec, const Eigen::MatrixXd& z) {
  const int d = spec.size();
  if (spec.h.size() != 2 * d - 1) throw InvalidArgument("Hankel sequence must have odd length");
  if (z.rows() != d) throw InvalidArgument("operand length must equal Hankel size");
  if (d <= kDirectLimit) return direct(spec, z);

  // (H z)[i] = sum_j h[i + j] z[j] = (h * r)[i + D - 1] with r[k] = z[D - 1 - k].
  int len = 1;
  while (len < 2 * d - 1) len <<= 1;
  const int bins = len / 2 + 1;

  double* real = fftw_alloc_real(len);
  fftw_complex* hs = fftw_alloc_complex(bins);
  fftw_complex* rs = fftw_alloc_complex(bins);
  fftw_plan forward_h, forward_r, backward;
  {
    std::lock_guard lock(planner_mutex());
    forward_h = fftw_plan_dft_r2c_1d(len, real, hs, FFTW_ESTIMATE);
    forward_r = fftw_plan_dft_r2c_1d(len, real, rs, FFTW_ESTIMATE);
    backward = fftw_plan_dft_c2r_1d(len, rs, real, FFTW_ESTIMATE);
  }

  std::fill(real, real + len, 0.0);
  for (int t = 0; t < 2 * d - 1; ++t) real[t] = spec.h[t];
  fftw_execute(forward_h);

  Eigen::MatrixXd out(d, z.cols());
  for (Eigen::Index c = 0; c < z.cols(); ++c) {
    std::fill(real, real + len, 0.0);
    for (int k = 0; k < d; ++k) real[k] = z(d - 1 - k, c);
    fftw_execute(forward_r);
    for (int k = 0; k < bins; ++k) {
      const std::complex<double> p = std::complex<double>(hs[k][0], hs[k][1]) *
                                     std::complex<double>(rs[k][0], rs[k][1]);
      rs[k][0] = p.real();
      rs[k][1] = p.imag();
    }
    fftw_execute(backward);
    for (int i = 0; i < d; ++i) out(i, c) = real[i + d - 1] / len;
  }

  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_h);
    fftw_destroy_plan(forward_r);
    fftw_destroy_plan(backward);
  }
  fftw_free(real);
  fftw_free(hs);
  fftw_free(rs);
  return out;
}

Eigen::MatrixXd geometric_hankel_matvec(double rho, double beta, int d, const Eigen::MatrixXd& z) {
  if (z.rows() != d) throw InvalidArgument("operand length must equal Hankel size");
  Eigen::VectorXd g(d);
  double power = 1.0;
  for (int l = 0; l < d; ++l) {
    g[l] = power;
    power *= rho;
  }
  return (beta * g) * (g.transpose() * z);
}

}  // namespace gfi
