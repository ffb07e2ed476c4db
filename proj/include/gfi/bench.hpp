#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gfi/error.hpp"
#include "gfi/geometry.hpp"
#include "gfi/integrator.hpp"
#include "gfi/kernel.hpp"

namespace gfi::bench {

/// Bad or missing configuration; `key` names the offending option.
class UsageError : public Error {
 public:
  UsageError(std::string key, const std::string& what) : Error(key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct Config {
  std::string command;
  /// Mesh (.off/.obj), point CSV (x,y,z) or generator: gen:sphere:N, gen:grid:NX:NY,
  /// gen:torus:MAJOR:MINOR, gen:icosphere:S.
  std::string input;
  std::string input_b;
  /// CSV path, or one of: normals, ones, coords.
  std::string field = "normals";
  std::vector<std::string> methods{"sf"};
  /// exp:LAMBDA or tabulated:PATH; empty means exp with the first lambda.
  std::string kernel;
  double epsilon = 0.1;
  std::vector<double> lambdas{0.2};
  int features = 16;
  double unit_size = 0.1;
  int threshold = 2000;
  int sep_size = 8;
  double mask_fraction = 0.8;
  int trees = 4;
  double alpha = 0.5;
  int max_iter = 100;
  /// GW inner entropic regularization; <= 0 picks the solver default.
  double inner_reg = 0.0;
  int centers = 3;
  int eigenvalues = 10;
  std::string mode = "gw";
  std::string features_a;
  std::string features_b;
  bool random_labels = false;
  /// Largest N for which brute-force references are run.
  int bf_limit = 5000;
  std::uint64_t seed = 0;
  std::string output;
  std::string report;

  nlohmann::json to_json() const;
};

/// Timings live apart from everything else so reports of repeated runs can be
/// compared byte for byte after dropping that block.
struct RunReport {
  std::string command;
  nlohmann::json config;
  double preprocess_ms = 0.0;
  double apply_ms = 0.0;
  nlohmann::json extra_timings = nlohmann::json::object();
  nlohmann::json metrics = nlohmann::json::object();
  std::uint64_t seed = 0;
  std::map<std::string, std::string> artifacts;
  std::vector<std::string> notices;

  nlohmann::json to_json() const;
  /// Sorted keys, two-space indent, trailing newline.
  std::string dump() const;
};

struct Geometry {
  std::optional<TriangleMesh> mesh;
  PointCloud cloud;
  /// Mesh edge graph; empty without faces.
  WeightedGraph graph;
};

Geometry load_geometry(const std::string& spec);
ScalarKernelFn parse_kernel(const std::string& spec, double default_lambda);
VertexField load_field(const std::string& spec, const Geometry& geometry);

/// Method names: bf (shortest-path kernel), bf-diffusion, sf, rfd, tree-mst,
/// tree-bartal[-K], tree-frt[-K]. For rfd and bf-diffusion `lambda` is the
/// diffusion time; otherwise it is the exponential decay rate.
std::shared_ptr<FieldIntegrator> make_integrator(const std::string& method, const Geometry& geometry,
                                                 const Config& config, double lambda);
/// Brute-force counterpart of a method: bf-diffusion for rfd, bf otherwise.
std::string reference_method(const std::string& method);

RunReport run_integrate(const Config& config);
RunReport run_interpolation_benchmark(const Config& config);
RunReport run_barycenter(const Config& config);
RunReport run_gw(const Config& config);
RunReport run_spectrum(const Config& config);

/// Dispatches on config.command and writes the report file when requested.
RunReport run(const Config& config);

/// Mean over rows of cos(a_i, b_i); rows where either side vanishes count as 0.
double mean_cosine_similarity(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);
double mean_squared_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

}  // namespace gfi::bench
