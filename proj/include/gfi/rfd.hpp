#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "gfi/geometry.hpp"
#include "gfi/integrator.hpp"

namespace gfi {

/// Fourier transform of the indicator f(z) = 1[|z_i| <= eps for all i] under
/// f(z) = int exp(2 pi i w.z) tau(w) dw: prod_i sin(2 pi eps w_i) / (pi w_i).
/// On axis-aligned displacements this indicator coincides with the L1 ball's.
double l1_ball_ft(const Eigen::Vector3d& omega, double epsilon);

/// Standard 3-D Gaussian restricted to the L1 ball of radius `radius`.
struct FrequencySampler {
  double radius = 10.0;
  std::uint64_t seed = 0;
};

using Frequencies = Eigen::Matrix<double, Eigen::Dynamic, 3>;

struct FrequencySample {
  Frequencies omega;
  Eigen::VectorXd pdf;
};

/// Gaussian mass of the L1 ball, Monte Carlo with 10^6 fixed-seed draws, cached per radius.
double gaussian_l1_ball_mass(double radius);

/// Truncated Gaussian density; zero outside the ball.
double truncated_gaussian_pdf(const Eigen::Vector3d& omega, double radius);

/// Rejection sampling; at most 10^6 attempts per sample.
FrequencySample sample_frequencies(int m, const FrequencySampler& sampler);

/// W ~= A B^T with feature pair k in columns (2k, 2k+1):
/// A = nu_k (cos t, sin t), B = (cos t, sin t), t = 2 pi omega_k . n_i.
struct RFDecomposition {
  Frequencies omega;
  Eigen::VectorXd nu;
  Eigen::MatrixXd a;
  Eigen::MatrixXd b;
  double epsilon = 0.0;
  double radius = 0.0;
  std::uint64_t seed = 0;

  int features() const { return static_cast<int>(nu.size()); }
};

RFDecomposition build_decomposition(const PointCloud& cloud, double epsilon, int m,
                                    const FrequencySampler& sampler);

/// (exp(lambda M) - I) M^{-1}, continuous at singular M: the top-right block
/// of exp([[lambda M, lambda I], [0, 0]]).
Eigen::MatrixXd small_phi1(const Eigen::MatrixXd& m, double lambda);

/// exp(lambda A B^T) X = X + A E (B^T X), E = small_phi1(B^T A, lambda).
Eigen::MatrixXd lowrank_expm_action(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                    double lambda, const Eigen::MatrixXd& x);
Eigen::MatrixXd expm_action(const RFDecomposition& decomp, double lambda, const Eigen::MatrixXd& x);

/// k smallest eigenvalues of exp(lambda A B^T), ascending.
Eigen::VectorXd lowrank_diffusion_spectrum(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                           double lambda, int k);
Eigen::VectorXd diffusion_spectrum(const RFDecomposition& decomp, double lambda, int k);

/// int_{-R}^{R} sin^2(2 pi eps x) / (pi x)^2 dx.
double gamma_integral(double epsilon, double radius);

/// Variance bound for one entry of A B^T at displacement z, truncation term dropped:
/// ((2 pi)^{3/2} C Gamma^3 - f(z)^2) / m with f the L1-ball indicator.
double mse_bound(int m, double epsilon, double radius, const Eigen::Vector3d& z);

struct CalibrationResult {
  double estimate = 0.0;
  bool passed = false;
};

/// Median-of-batch-means estimate of the z = 0 weight, which must be near 1 for the
/// Fourier convention in l1_ball_ft to be consistent with the sampler.
CalibrationResult fourier_calibration(double epsilon = 0.5, int samples = 2'000'000);
/// Runs fourier_calibration once per process; throws NumericalError on failure.
void ensure_fourier_calibration();

/// Random-feature diffusion exp(lambda W) over the L1 epsilon-NN graph of a cloud.
class RFDIntegrator : public FieldIntegrator {
 public:
  RFDIntegrator(const PointCloud& cloud, double epsilon, double lambda, int m,
                FrequencySampler sampler = {});

  VertexField apply(const VertexField& field) const override;
  int num_vertices() const override { return static_cast<int>(decomp_.a.rows()); }
  std::string name() const override { return "rfd"; }

  const RFDecomposition& decomposition() const { return decomp_; }

 private:
  RFDecomposition decomp_;
  double lambda_;
  Eigen::MatrixXd phi_;
};

}  // namespace gfi
