#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gfi/dense_oracle.hpp"
#include "gfi/rfd.hpp"
#include "oracles.hpp"

using namespace gfi;

namespace {

PointCloud random_cloud(int n, unsigned seed) {
  std::srand(seed);
  return PointCloud(Points::Random(n, 3));
}

Eigen::MatrixXd dense_lowrank(const RFDecomposition& d) { return d.a * d.b.transpose(); }

}  // namespace

TEST_CASE("Fourier transform of the ball indicator") {
  CHECK(l1_ball_ft(Eigen::Vector3d::Zero(), 0.5) == doctest::Approx(1.0));
  const double a = 0.37, eps = 0.3;
  CHECK(l1_ball_ft(Eigen::Vector3d(a, 0, 0), eps) ==
        doctest::Approx(std::sin(2 * std::numbers::pi * eps * a) / (std::numbers::pi * a) * 4 * eps * eps));
  CHECK(l1_ball_ft(Eigen::Vector3d(0.6, 0, 0), 1.0) == doctest::Approx(-1.247).epsilon(1e-3));
  // Continuity at a zero coordinate.
  CHECK(l1_ball_ft(Eigen::Vector3d(1e-10, 0, 0), 0.5) == doctest::Approx(1.0));
}

TEST_CASE("negative lobe agrees with 1-D quadrature") {
  // int_{-1}^{1} cos(2 pi w z) dz at w = 0.6 by the midpoint rule, times (2 eps)^2.
  const int steps = 200000;
  double sum = 0.0;
  for (int i = 0; i < steps; ++i) {
    const double z = -1.0 + (i + 0.5) * 2.0 / steps;
    sum += std::cos(2 * std::numbers::pi * 0.6 * z);
  }
  const double quad = sum * 2.0 / steps * 4.0;
  CHECK(l1_ball_ft(Eigen::Vector3d(0.6, 0, 0), 1.0) == doctest::Approx(quad).epsilon(1e-8));
}

TEST_CASE("frequency sampler") {
  const FrequencySample s = sample_frequencies(4000, {10.0, 42});
  CHECK((s.omega.cwiseAbs().rowwise().sum().array() <= 10.0).all());
  CHECK(s.omega.colwise().mean().cwiseAbs().maxCoeff() <= 4.0 / std::sqrt(4000.0));
  CHECK(gaussian_l1_ball_mass(10.0) > 0.99);
  const FrequencySample again = sample_frequencies(4000, {10.0, 42});
  CHECK(again.omega == s.omega);
  CHECK(s.pdf[0] == doctest::Approx(std::pow(2 * std::numbers::pi, -1.5) *
                                    std::exp(-0.5 * s.omega.row(0).squaredNorm()) / gaussian_l1_ball_mass(10.0)));
}

TEST_CASE("low-rank matrix is symmetric") {
  const RFDecomposition d = build_decomposition(random_cloud(80, 1), 0.3, 16, {10.0, 7});
  const Eigen::MatrixXd w = dense_lowrank(d);
  CHECK((w - w.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * w.cwiseAbs().maxCoeff());
  CHECK(d.a.cols() == 32);
}

TEST_CASE("coincident points estimate the unit weight without bias") {
  const Points p = Points::Zero(2, 3);
  const int seeds = 50;
  std::vector<double> x;
  for (int s = 0; s < seeds; ++s) x.push_back(dense_lowrank(build_decomposition(PointCloud(p), 0.5, 64, {10.0, 1000u + s}))(0, 1));
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= seeds;
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  const double se = std::sqrt(var / (seeds - 1) / seeds);
  CHECK(std::abs(mean - 1.0) <= 3.0 * se);
}

TEST_CASE("pairs at distance two epsilon estimate zero") {
  Points p = Points::Zero(2, 3);
  p(1, 0) = 1.0;
  const int seeds = 50;
  std::vector<double> x;
  for (int s = 0; s < seeds; ++s) x.push_back(dense_lowrank(build_decomposition(PointCloud(p), 0.5, 64, {10.0, 5000u + s}))(0, 1));
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= seeds;
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  const double se = std::sqrt(var / (seeds - 1) / seeds);
  CHECK(std::abs(mean) <= 3.0 * se);
}

TEST_CASE("small phi1") {
  const Eigen::MatrixXd z = small_phi1(Eigen::MatrixXd::Zero(3, 3), 0.7);
  CHECK((z - 0.7 * Eigen::MatrixXd::Identity(3, 3)).norm() <= 1e-14);
  const Eigen::MatrixXd i = small_phi1(Eigen::MatrixXd::Identity(3, 3), 1.0);
  CHECK((i - (std::exp(1.0) - 1.0) * Eigen::MatrixXd::Identity(3, 3)).norm() <= 1e-13);
  std::srand(4);
  const Eigen::MatrixXd m = Eigen::MatrixXd::Random(8, 8) + 3.0 * Eigen::MatrixXd::Identity(8, 8);
  const double lambda = 0.4;
  const Eigen::MatrixXd want =
      (oracle::taylor_expm(m, lambda) - Eigen::MatrixXd::Identity(8, 8)) * m.partialPivLu().inverse();
  CHECK(oracle::rel_error(small_phi1(m, lambda), want) <= 1e-10);
}

TEST_CASE("expm action") {
  const RFDecomposition d = build_decomposition(random_cloud(30, 2), 0.4, 4, {10.0, 3});
  const Eigen::MatrixXd x = Eigen::MatrixXd::Random(30, 2);
  CHECK(expm_action(d, 0.0, x) == x);
  Eigen::MatrixXd e1 = Eigen::MatrixXd::Zero(2, 1);
  e1(0, 0) = 1.0;
  const Eigen::MatrixXd r = lowrank_expm_action(e1, e1, 1.0, Eigen::MatrixXd::Ones(2, 1));
  CHECK(r(0, 0) == doctest::Approx(std::exp(1.0)));
  CHECK(r(1, 0) == doctest::Approx(1.0));
}

TEST_CASE("expm action equals the dense exponential of the same low-rank matrix") {
  const RFDecomposition d = build_decomposition(random_cloud(100, 5), 0.05, 8, {10.0, 9});
  const Eigen::MatrixXd x = Eigen::MatrixXd::Random(100, 3);
  for (double lambda : {-0.8, 0.3}) {
    const Eigen::MatrixXd want = dense_symmetric_expm_apply(dense_lowrank(d), lambda, x);
    CHECK(oracle::rel_error(expm_action(d, lambda, x), want) <= 1e-8);
  }
}

TEST_CASE("spectrum") {
  const RFDecomposition d = build_decomposition(random_cloud(40, 6), 0.5, 3, {10.0, 4});
  CHECK(diffusion_spectrum(d, 0.0, 5).isOnes());
  Eigen::MatrixXd e1 = Eigen::MatrixXd::Zero(4, 1);
  e1(0, 0) = 1.0;
  const Eigen::VectorXd s = lowrank_diffusion_spectrum(e1, e1, 0.9, 2);
  CHECK(s(0) == doctest::Approx(1.0));
  CHECK(s(1) == doctest::Approx(1.0));

  const RFDecomposition big = build_decomposition(random_cloud(150, 8), 0.5, 6, {10.0, 12});
  const double lambda = -0.3;
  SymmetricEigen e = symmetric_eigen(dense_lowrank(big));
  std::vector<double> want;
  for (int i = 0; i < 150; ++i) want.push_back(std::exp(lambda * e.values[i]));
  std::sort(want.begin(), want.end());
  const Eigen::VectorXd got = diffusion_spectrum(big, lambda, 20);
  for (int i = 0; i < 20; ++i) CHECK(std::abs(got[i] - want[i]) <= 1e-6);
}

TEST_CASE("variance bound") {
  const Eigen::Vector3d z(0.1, 0, 0);
  CHECK(mse_bound(32, 0.5, 10.0, z) > mse_bound(64, 0.5, 10.0, z));
  CHECK(mse_bound(1 << 28, 0.5, 10.0, z) < 1e-6);
  // Gamma tends to the full integral 2 eps as R grows.
  CHECK(gamma_integral(0.5, 10.0) == doctest::Approx(1.0).epsilon(0.02));
  CHECK(gamma_integral(0.5, 10.0) < 1.0);
}

TEST_CASE("Fourier calibration") {
  const CalibrationResult r = fourier_calibration();
  CHECK(r.passed);
  MESSAGE("z = 0 estimate " << r.estimate);
}

TEST_CASE("integrator with zero diffusion time is the identity") {
  const PointCloud c = random_cloud(50, 3);
  const RFDIntegrator rfd(c, 0.2, 0.0, 8);
  const Eigen::MatrixXd x = Eigen::MatrixXd::Random(50, 2);
  CHECK(rfd.apply(x) == x);
}
