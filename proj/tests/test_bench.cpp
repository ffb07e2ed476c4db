#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gfi/bench.hpp"
#include "gfi/csv.hpp"
#include "gfi/error.hpp"

using namespace gfi;
using namespace gfi::bench;

namespace {

std::string temp_path(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "gfi_bench_test";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

Config base(const std::string& command) {
  Config c;
  c.command = command;
  c.input = "gen:sphere:300";
  return c;
}

nlohmann::json without_timings(const RunReport& r) {
  nlohmann::json j = r.to_json();
  j.erase("timings");
  return j;
}

std::string usage_key(const Config& c) {
  try {
    run(c);
  } catch (const UsageError& e) {
    return e.key();
  }
  return "";
}

}  // namespace

TEST_CASE("geometry specs") {
  CHECK(load_geometry("gen:sphere:300").mesh.has_value());
  CHECK(load_geometry("gen:grid:5:4").cloud.size() == 20);
  CHECK(load_geometry("gen:icosphere:1").cloud.size() == 42);
  CHECK_THROWS_AS(load_geometry("gen:cube:3"), UsageError);
  CHECK_THROWS_AS(load_geometry("gen:sphere:x"), UsageError);

  const std::string pts = temp_path("points.csv");
  write_csv(pts, Eigen::MatrixXd::Random(12, 3), {"x", "y", "z"});
  const Geometry g = load_geometry(pts);
  CHECK_FALSE(g.mesh.has_value());
  CHECK(g.cloud.size() == 12);
  CHECK_THROWS_AS(load_field("normals", g), UsageError);
}

TEST_CASE("kernel specs") {
  CHECK(parse_kernel("", 0.7).decay() == 0.7);
  CHECK(parse_kernel("exp:2.5", 0.7).decay() == 2.5);
  const std::string tab = temp_path("kernel.csv");
  write_csv(tab, (Eigen::MatrixXd(3, 2) << 0.0, 1.0, 0.5, 0.5, 1.0, 0.25).finished(), {"d", "f"});
  const ScalarKernelFn f = parse_kernel("tabulated:" + tab, 1.0);
  CHECK_FALSE(f.is_exponential());
  CHECK(f(0.5) == 0.5);
  CHECK_THROWS_AS(parse_kernel("gauss:1", 1.0), UsageError);
  CHECK_THROWS_AS(parse_kernel("exp:abc", 1.0), UsageError);
}

TEST_CASE("sf against bf reports mse") {
  Config c = base("integrate");
  c.methods = {"sf"};
  c.field = "coords";
  c.threshold = 50;
  c.output = temp_path("sf.csv");
  const RunReport r = run(c);
  CHECK(r.metrics.contains("mse"));
  CHECK(r.metrics["mse"].get<double>() >= 0.0);
  CHECK(r.preprocess_ms >= 0.0);
  CHECK(r.apply_ms >= 0.0);
  CHECK(read_csv(c.output).rows() == load_geometry(c.input).cloud.size());
}

TEST_CASE("rfd with zero diffusion time returns the input") {
  Config c = base("integrate");
  c.methods = {"rfd"};
  c.lambdas = {0.0};
  c.field = "coords";
  c.output = temp_path("rfd.csv");
  run(c);
  const Eigen::MatrixXd out = read_csv(c.output);
  CHECK(out == load_geometry(c.input).cloud.points());
}

TEST_CASE("reports are deterministic apart from timings") {
  Config c = base("integrate");
  c.methods = {"tree-frt-3"};
  c.field = "coords";
  c.output = temp_path("frt.csv");
  c.report = temp_path("frt.json");
  const RunReport a = run(c);
  std::ifstream in(c.report);
  std::stringstream text;
  text << in.rdbuf();
  CHECK(text.str() == a.dump());
  const RunReport b = run(c);
  CHECK(without_timings(a).dump() == without_timings(b).dump());
  // Sorted keys.
  CHECK(a.dump().find("\"artifacts\"") < a.dump().find("\"command\""));
}

TEST_CASE("interpolation flags the best case per method") {
  Config c = base("interpolate");
  c.methods = {"bf", "tree-mst"};
  c.lambdas = {1.0, 8.0};
  c.output = temp_path("interp.csv");
  const RunReport r = run(c);
  CHECK(r.metrics["cases"].size() == 4);
  for (const auto& m : {"bf", "tree-mst"}) {
    const double best = r.metrics["best"][m]["cosine_similarity"].get<double>();
    for (const auto& row : r.metrics["cases"])
      if (row["method"] == m) CHECK(row["cosine_similarity"].get<double>() <= best);
  }
  const long n = load_geometry(c.input).cloud.size();
  CHECK(r.metrics["masked_vertices"].get<long>() == std::lround(0.8 * n));
  const Eigen::MatrixXd x = Eigen::MatrixXd::Random(10, 3);
  CHECK(mean_cosine_similarity(x, x) == doctest::Approx(1.0));
}

TEST_CASE("barycenter compares against brute force on small meshes") {
  Config c = base("barycenter");
  c.methods = {"sf"};
  c.lambdas = {0.2};
  c.max_iter = 50;
  c.output = temp_path("bary.csv");
  const RunReport r = run(c);
  CHECK(r.metrics["inputs"] == 3);
  CHECK(r.metrics["mse"].get<double>() <= 1e-2);
  CHECK(r.metrics["centers"].size() == 3);
  c.bf_limit = 10;
  CHECK_FALSE(run(c).metrics.contains("mse"));
}

TEST_CASE("gw on identical inputs") {
  Config c = base("gw");
  c.methods = {"bf"};
  c.lambdas = {2.0};
  c.inner_reg = 1e-4;
  const RunReport r = run(c);
  CHECK(r.metrics["cost"].get<double>() <= 1e-6);
  CHECK(r.metrics["max_marginal_error"].get<double>() <= 1e-9);
}

TEST_CASE("fgw needs features") {
  Config c = base("gw");
  c.mode = "fgw";
  c.methods = {"bf"};
  CHECK(usage_key(c) == "features-a");
  c.random_labels = true;
  c.max_iter = 5;
  c.inner_reg = 1e-3;
  CHECK(run(c).metrics["cost"].get<double>() >= 0.0);
}

TEST_CASE("spectrum") {
  Config c = base("spectrum");
  c.lambdas = {0.0};
  c.eigenvalues = 4;
  c.output = temp_path("spectrum.csv");
  RunReport r = run(c);
  for (double v : r.metrics["eigenvalues"]) CHECK(v == 1.0);
  CHECK(read_csv(c.output).cols() == 4);
  c.lambdas = {-0.1};
  r = run(c);
  CHECK(r.metrics["max_abs_error_vs_dense"].get<double>() <= 1e-6);
  c.eigenvalues = 100000;
  CHECK(usage_key(c) == "eigenvalues");
}

TEST_CASE("usage errors name the key") {
  Config c = base("integrate");
  CHECK(usage_key(c) == "output");
  c.output = temp_path("x.csv");
  c.methods = {"magic"};
  CHECK(usage_key(c) == "method");
  c.methods = {"sf", "bf"};
  CHECK(usage_key(c) == "method");
  c.command = "dance";
  CHECK(usage_key(c) == "command");
}
