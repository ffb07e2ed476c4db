#include "gfi/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gfi/csv.hpp"
#include "gfi/dense_oracle.hpp"
#include "gfi/random.hpp"
#include "gfi/rfd.hpp"
#include "gfi/sf.hpp"
#include "gfi/transport.hpp"
#include "gfi/trees.hpp"

namespace gfi::bench {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

int parse_int(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw UsageError(key, "expected an integer, got '" + text + "'");
  }
}

double parse_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw UsageError(key, "expected a number, got '" + text + "'");
  }
}

TriangleMesh generate_mesh(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() < 3) throw UsageError("input", "generator needs parameters: " + spec);
  const std::string& kind = parts[1];
  if (kind == "sphere" && parts.size() == 3) return uv_sphere_with_vertices(parse_int("input", parts[2]));
  if (kind == "grid" && parts.size() == 4)
    return grid_mesh(parse_int("input", parts[2]), parse_int("input", parts[3]));
  if (kind == "torus" && parts.size() == 4)
    return torus(parse_int("input", parts[2]), parse_int("input", parts[3]));
  if (kind == "icosphere" && parts.size() == 3) return icosphere(parse_int("input", parts[2]));
  throw UsageError("input", "unknown generator " + spec);
}

void require_graph(const Geometry& g, const std::string& method) {
  if (!g.mesh) throw UsageError("method", method + " needs a mesh input (shortest paths run on mesh edges)");
}

int tree_count(const std::string& method, const std::string& prefix, int fallback) {
  if (method == prefix) return fallback;
  return parse_int("method", method.substr(prefix.size() + 1));
}

bool is_bf(const std::string& method) { return method == "bf" || method == "bf-diffusion"; }

bool reference_feasible(const std::string& method, const Geometry& g, const Config& c) {
  if (is_bf(method) || g.cloud.size() > c.bf_limit) return false;
  return reference_method(method) == "bf-diffusion" ? g.cloud.size() <= kDenseDiffusionLimit
                                                    : g.mesh.has_value();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw Error("failed writing " + path);
}

struct Timed {
  std::shared_ptr<FieldIntegrator> integrator;
  VertexField result;
  double apply_ms = 0.0;
};

Timed integrate(const std::string& method, const Geometry& g, const Config& c, double lambda,
                const VertexField& field) {
  Timed t;
  t.integrator = make_integrator(method, g, c, lambda);
  const auto start = Clock::now();
  t.result = t.integrator->apply(field);
  t.apply_ms = ms_since(start);
  return t;
}

RunReport start_report(const Config& c) {
  RunReport r;
  r.command = c.command;
  r.config = c.to_json();
  r.seed = c.seed;
  return r;
}

const std::string& single_method(const Config& c) {
  if (c.methods.size() != 1) throw UsageError("method", "exactly one method expected");
  return c.methods.front();
}

double first_lambda(const Config& c) {
  if (c.lambdas.empty()) throw UsageError("lambda", "missing");
  return c.lambdas.front();
}

std::vector<Eigen::VectorXd> synthesize_inputs(const Geometry& g, const Eigen::VectorXd& area, int k,
                                               std::uint64_t seed, std::vector<int>& centers) {
  Rng rng(seed);
  centers = sample_without_replacement(g.cloud.size(), k, rng);
  std::sort(centers.begin(), centers.end());
  // Gaussian bumps in geodesic distance; full support keeps every scaling finite.
  constexpr double kWidth = 0.2;
  if (!is_connected(g.graph)) throw UsageError("input", "synthesized barycenter inputs need a connected mesh");
  std::vector<Eigen::VectorXd> inputs;
  for (int c : centers) {
    const std::vector<double> d = sssp(g.graph, c);
    Eigen::VectorXd mu(g.cloud.size());
    for (int v = 0; v < mu.size(); ++v)
      mu[v] = std::exp(-d[v] * d[v] / (2.0 * kWidth * kWidth));
    inputs.push_back(mu / area.dot(mu));
  }
  return inputs;
}

Eigen::MatrixXd feature_cost(const Eigen::MatrixXd& fa, const Eigen::MatrixXd& fb) {
  Eigen::MatrixXd m(fa.rows(), fb.rows());
  for (Eigen::Index i = 0; i < fa.rows(); ++i)
    for (Eigen::Index j = 0; j < fb.rows(); ++j) m(i, j) = (fa.row(i) - fb.row(j)).squaredNorm();
  return m;
}

Eigen::MatrixXd random_labels(int n, Rng& rng) {
  std::bernoulli_distribution coin(0.5);
  Eigen::MatrixXd l(n, 1);
  for (int i = 0; i < n; ++i) l(i, 0) = coin(rng) ? 1.0 : 0.0;
  return l;
}

}  // namespace

nlohmann::json Config::to_json() const {
  return {{"command", command},
          {"input", input},
          {"input_b", input_b},
          {"field", field},
          {"methods", methods},
          {"kernel", kernel},
          {"epsilon", epsilon},
          {"lambdas", lambdas},
          {"features", features},
          {"unit_size", unit_size},
          {"threshold", threshold},
          {"sep_size", sep_size},
          {"mask_fraction", mask_fraction},
          {"trees", trees},
          {"alpha", alpha},
          {"max_iter", max_iter},
          {"inner_reg", inner_reg},
          {"centers", centers},
          {"eigenvalues", eigenvalues},
          {"mode", mode},
          {"features_a", features_a},
          {"features_b", features_b},
          {"random_labels", random_labels},
          {"bf_limit", bf_limit},
          {"seed", seed},
          {"output", output},
          {"report", report}};
}

nlohmann::json RunReport::to_json() const {
  nlohmann::json timings = extra_timings;
  timings["preprocess_ms"] = preprocess_ms;
  timings["apply_ms"] = apply_ms;
  return {{"command", command}, {"config", config},     {"timings", timings}, {"metrics", metrics},
          {"seed", seed},       {"artifacts", artifacts}, {"notices", notices}};
}

std::string RunReport::dump() const { return to_json().dump(2) + "\n"; }

Geometry load_geometry(const std::string& spec) {
  if (spec.empty()) throw UsageError("input", "missing");
  if (spec.rfind("gen:", 0) == 0) {
    TriangleMesh mesh = normalize_mesh(generate_mesh(spec));
    WeightedGraph graph = mesh_to_graph(mesh);
    PointCloud cloud = mesh.cloud();
    return {std::move(mesh), std::move(cloud), std::move(graph)};
  }
  if (ends_with(spec, ".csv")) {
    const Eigen::MatrixXd p = read_csv(spec);
    if (p.cols() != 3) throw UsageError("input", "point CSV must have three columns");
    return {std::nullopt, normalize_points(PointCloud(Points(p))), WeightedGraph()};
  }
  TriangleMesh mesh = normalize_mesh(read_mesh_file(spec));
  WeightedGraph graph = mesh_to_graph(mesh);
  PointCloud cloud = mesh.cloud();
  return {std::move(mesh), std::move(cloud), std::move(graph)};
}

ScalarKernelFn parse_kernel(const std::string& spec, double default_lambda) {
  if (spec.empty()) return ScalarKernelFn::exponential(default_lambda);
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw UsageError("kernel", "expected exp:LAMBDA or tabulated:PATH");
  const std::string kind = spec.substr(0, colon), arg = spec.substr(colon + 1);
  if (kind == "exp") return ScalarKernelFn::exponential(parse_double("kernel", arg));
  if (kind == "tabulated") {
    const Eigen::MatrixXd t = read_csv(arg);
    if (t.cols() != 2 || t.rows() < 2) throw UsageError("kernel", "tabulated kernel needs distance,value rows");
    const double unit = t(1, 0) - t(0, 0);
    if (t(0, 0) != 0.0 || !(unit > 0.0)) throw UsageError("kernel", "tabulated grid must start at 0 and increase");
    for (Eigen::Index i = 1; i < t.rows(); ++i)
      if (std::abs(t(i, 0) - i * unit) > 1e-9 * std::max(1.0, i * unit))
        throw UsageError("kernel", "tabulated grid must be uniform");
    std::vector<double> samples(t.rows());
    for (Eigen::Index i = 0; i < t.rows(); ++i) samples[i] = t(i, 1);
    return ScalarKernelFn::tabulated(unit, std::move(samples));
  }
  throw UsageError("kernel", "unknown kernel family " + kind);
}

VertexField load_field(const std::string& spec, const Geometry& g) {
  const int n = g.cloud.size();
  if (spec == "normals") {
    if (!g.mesh || g.mesh->num_faces() == 0) throw UsageError("field", "normals need a mesh with faces");
    return vertex_normals(*g.mesh);
  }
  if (spec == "ones") return VertexField::Ones(n, 1);
  if (spec == "coords") return g.cloud.points();
  const Eigen::MatrixXd f = read_csv(spec);
  if (f.rows() != n)
    throw UsageError("field", "field has " + std::to_string(f.rows()) + " rows, input has " + std::to_string(n));
  return f;
}

std::string reference_method(const std::string& method) { return method == "rfd" ? "bf-diffusion" : "bf"; }

std::shared_ptr<FieldIntegrator> make_integrator(const std::string& method, const Geometry& g,
                                                 const Config& c, double lambda) {
  if (method == "bf") {
    require_graph(g, method);
    return DenseMatrixIntegrator::shortest_path(g.graph, parse_kernel(c.kernel, lambda));
  }
  if (method == "bf-diffusion") {
    if (g.cloud.size() > kDenseDiffusionLimit) throw UsageError("method", "bf-diffusion input too large");
    return std::make_shared<BFDiffusionIntegrator>(g.cloud, DiffusionSpec{lambda, c.epsilon, WeightMode::kBinary});
  }
  if (method == "sf") {
    require_graph(g, method);
    SFConfig sc;
    sc.sep_size = c.sep_size;
    sc.unit_size = c.unit_size;
    sc.threshold = c.threshold;
    sc.seed = c.seed;
    return std::make_shared<SFIntegrator>(g.graph, parse_kernel(c.kernel, lambda), sc);
  }
  if (method == "rfd") {
    if (c.features < 1) throw UsageError("features", "must be at least 1");
    return std::make_shared<RFDIntegrator>(g.cloud, c.epsilon, lambda, c.features, FrequencySampler{10.0, c.seed});
  }
  if (method == "tree-mst") {
    require_graph(g, method);
    return std::make_shared<TreeEnsembleIntegrator>(g.graph, TreeKind::kMst, 1, lambda, c.seed);
  }
  for (const auto& [prefix, kind] : {std::pair{std::string("tree-bartal"), TreeKind::kBartal},
                                     std::pair{std::string("tree-frt"), TreeKind::kFrt}}) {
    if (method == prefix || method.rfind(prefix + "-", 0) == 0) {
      require_graph(g, method);
      const int k = tree_count(method, prefix, c.trees);
      if (k < 1) throw UsageError("trees", "must be at least 1");
      return std::make_shared<TreeEnsembleIntegrator>(g.graph, kind, k, lambda, c.seed);
    }
  }
  throw UsageError("method", "unknown method " + method);
}

double mean_cosine_similarity(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw InvalidArgument("shape mismatch");
  if (a.rows() == 0) return 0.0;
  double total = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const double na = a.row(i).norm(), nb = b.row(i).norm();
    if (na > 0.0 && nb > 0.0) total += a.row(i).dot(b.row(i)) / (na * nb);
  }
  return total / static_cast<double>(a.rows());
}

double mean_squared_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw InvalidArgument("shape mismatch");
  return (a - b).squaredNorm() / static_cast<double>(a.size());
}

RunReport run_integrate(const Config& c) {
  RunReport r = start_report(c);
  const std::string& method = single_method(c);
  if (c.output.empty()) throw UsageError("output", "missing");
  const Geometry g = load_geometry(c.input);
  const VertexField field = load_field(c.field, g);
  const double lambda = first_lambda(c);

  {
    const Timed t = integrate(method, g, c, lambda, field);
    r.preprocess_ms = t.integrator->preprocess_ms();
    r.apply_ms = t.apply_ms;
    write_csv(c.output, t.result);
    r.artifacts["field"] = c.output;
    r.metrics["rows"] = t.result.rows();
    r.metrics["cols"] = t.result.cols();
    r.metrics["method"] = t.integrator->name();

    if (reference_feasible(method, g, c)) {
      const Timed ref = integrate(reference_method(method), g, c, lambda, field);
      r.metrics["reference"] = reference_method(method);
      r.metrics["mse"] = mean_squared_error(t.result, ref.result);
      r.metrics["relative_error"] = (t.result - ref.result).norm() / std::max(ref.result.norm(), 1e-300);
      r.extra_timings["reference_ms"] = ref.integrator->preprocess_ms() + ref.apply_ms;
    } else if (!is_bf(method)) {
      r.notices.push_back("brute-force comparison skipped: input too large or unsupported");
    }
  }
  return r;
}

RunReport run_interpolation_benchmark(const Config& c) {
  RunReport r = start_report(c);
  if (c.methods.empty()) throw UsageError("method", "missing");
  if (c.lambdas.empty()) throw UsageError("lambda", "missing");
  if (!(c.mask_fraction > 0.0 && c.mask_fraction < 1.0)) throw UsageError("mask-fraction", "must lie in (0, 1)");
  const Geometry g = load_geometry(c.input);
  const VertexField truth = load_field(c.field, g);
  Rng rng(c.seed);
  const MaskedField masked = mask_field(truth, c.mask_fraction, rng);
  const auto& idx = masked.mask.indices;
  Eigen::MatrixXd truth_masked(idx.size(), truth.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) truth_masked.row(i) = truth.row(idx[i]);

  std::ostringstream table;
  table << "method,lambda,cosine_similarity,preprocess_ms,apply_ms,best\n";
  nlohmann::json cases = nlohmann::json::array(), timings = nlohmann::json::array();
  nlohmann::json best = nlohmann::json::object();
  struct Row {
    std::string method;
    double lambda, cosine, pre, apply;
  };
  std::vector<Row> rows;
  for (const std::string& method : c.methods) {
    for (double lambda : c.lambdas) {
      Timed t;
      try {
        t = integrate(method, g, c, lambda, masked.masked);
      } catch (const NumericalError& e) {
        r.notices.push_back(method + " at lambda " + std::to_string(lambda) + " failed: " + e.what());
        continue;
      }
      Eigen::MatrixXd pred(idx.size(), truth.cols());
      for (std::size_t i = 0; i < idx.size(); ++i) pred.row(i) = t.result.row(idx[i]);
      rows.push_back({method, lambda, mean_cosine_similarity(pred, truth_masked), t.integrator->preprocess_ms(),
                      t.apply_ms});
      r.preprocess_ms += rows.back().pre;
      r.apply_ms += rows.back().apply;
    }
  }
  for (const std::string& method : c.methods) {
    const Row* top = nullptr;
    for (const Row& row : rows)
      if (row.method == method && (!top || row.cosine > top->cosine)) top = &row;
    if (top) best[method] = {{"lambda", top->lambda}, {"cosine_similarity", top->cosine}};
  }
  for (const Row& row : rows) {
    const bool is_best = best[row.method]["lambda"].get<double>() == row.lambda;
    cases.push_back({{"method", row.method}, {"lambda", row.lambda}, {"cosine_similarity", row.cosine},
                     {"best", is_best}});
    timings.push_back({{"method", row.method}, {"lambda", row.lambda}, {"preprocess_ms", row.pre},
                       {"apply_ms", row.apply}});
    table.precision(17);
    table << row.method << ',' << row.lambda << ',' << row.cosine << ',' << row.pre << ',' << row.apply << ','
          << (is_best ? 1 : 0) << '\n';
  }
  r.metrics["cases"] = cases;
  r.metrics["best"] = best;
  r.metrics["masked_vertices"] = idx.size();
  r.extra_timings["cases"] = timings;
  if (!c.output.empty()) {
    write_text(c.output, table.str());
    r.artifacts["table"] = c.output;
  }
  return r;
}

RunReport run_barycenter(const Config& c) {
  RunReport r = start_report(c);
  const std::string& method = single_method(c);
  if (c.centers < 1) throw UsageError("centers", "need at least one input distribution");
  const Geometry g = load_geometry(c.input);
  if (!g.mesh || g.mesh->num_faces() == 0) throw UsageError("input", "barycenters need a mesh with faces");
  const Eigen::VectorXd area = area_weights(*g.mesh);
  const double lambda = first_lambda(c);

  std::vector<Eigen::VectorXd> inputs;
  if (ends_with(c.field, ".csv")) {
    const Eigen::MatrixXd cols = read_csv(c.field);
    if (cols.rows() != g.cloud.size()) throw UsageError("field", "one row per vertex expected");
    for (Eigen::Index j = 0; j < cols.cols(); ++j) inputs.push_back(cols.col(j) / area.dot(cols.col(j)));
  } else {
    std::vector<int> centers;
    inputs = synthesize_inputs(g, area, c.centers, split_seed(c.seed, 1), centers);
    r.metrics["centers"] = centers;
  }
  const int k = static_cast<int>(inputs.size());
  const Eigen::VectorXd alpha = Eigen::VectorXd::Constant(k, 1.0 / k);
  BarycenterOptions opt;
  opt.max_iter = c.max_iter;

  auto solve = [&](const std::string& m, double& pre, double& solve_ms) {
    const auto fm = make_integrator(m, g, c, lambda);
    pre = fm->preprocess_ms();
    const auto start = Clock::now();
    BarycenterResult res = wasserstein_barycenter(FMHandle(fm), inputs, area, alpha, opt);
    solve_ms = ms_since(start);
    return res;
  };
  const BarycenterResult res = solve(method, r.preprocess_ms, r.apply_ms);
  r.metrics["iterations"] = res.iterations;
  r.metrics["converged"] = res.converged;
  r.metrics["inputs"] = k;
  if (!c.output.empty()) {
    write_csv(c.output, res.mu, {"mu"});
    r.artifacts["barycenter"] = c.output;
  }
  if (reference_feasible(method, g, c)) {
    double pre = 0.0, solve_ms = 0.0;
    const BarycenterResult ref = solve(reference_method(method), pre, solve_ms);
    r.metrics["reference"] = reference_method(method);
    r.metrics["mse"] = mean_squared_error(res.mu, ref.mu);
    r.extra_timings["reference_ms"] = pre + solve_ms;
    r.extra_timings["speedup"] = (pre + solve_ms) / std::max(r.preprocess_ms + r.apply_ms, 1e-9);
  } else if (!is_bf(method)) {
    r.notices.push_back("brute-force comparison skipped: input too large or unsupported");
  }
  return r;
}

RunReport run_gw(const Config& c) {
  RunReport r = start_report(c);
  const std::string& method = single_method(c);
  if (c.mode != "gw" && c.mode != "fgw") throw UsageError("mode", "expected gw or fgw");
  const Geometry ga = load_geometry(c.input);
  const Geometry gb = load_geometry(c.input_b.empty() ? c.input : c.input_b);
  const double lambda = first_lambda(c);
  const int n = ga.cloud.size(), m = gb.cloud.size();
  const Eigen::VectorXd p = Eigen::VectorXd::Constant(n, 1.0 / n), q = Eigen::VectorXd::Constant(m, 1.0 / m);

  Eigen::MatrixXd feature;
  double alpha = 1.0;
  if (c.mode == "fgw") {
    if (!(c.alpha > 0.0 && c.alpha <= 1.0)) throw UsageError("alpha", "must lie in (0, 1]");
    alpha = c.alpha;
    Eigen::MatrixXd fa, fb;
    if (c.random_labels) {
      Rng rng(split_seed(c.seed, 2));
      fa = random_labels(n, rng);
      fb = random_labels(m, rng);
    } else if (!c.features_a.empty() && !c.features_b.empty()) {
      fa = read_csv(c.features_a);
      fb = read_csv(c.features_b);
      if (fa.rows() != n || fb.rows() != m || fa.cols() != fb.cols())
        throw UsageError("features-a", "feature CSVs must have one row per point and equal widths");
    } else {
      throw UsageError("features-a", "fgw needs --features-a/--features-b or --random-labels");
    }
    feature = feature_cost(fa, fb);
  }
  GWOptions opt;
  opt.max_iter = c.max_iter;
  opt.reg = c.inner_reg;

  auto solve = [&](const std::string& name, double& pre, double& solve_ms) {
    const auto ca = make_integrator(name, ga, c, lambda);
    const auto cb = make_integrator(name, gb, c, lambda);
    pre = ca->preprocess_ms() + cb->preprocess_ms();
    const auto start = Clock::now();
    GWResult res = gw_conditional_gradient(FMHandle(ca), FMHandle(cb), p, q, alpha, feature, opt);
    solve_ms = ms_since(start);
    return res;
  };
  const GWResult res = solve(method, r.preprocess_ms, r.apply_ms);
  r.metrics["cost"] = res.cost;
  r.metrics["iterations"] = res.iterations;
  r.metrics["max_marginal_error"] = res.max_marginal_error;
  if (!c.output.empty()) {
    write_csv(c.output, res.coupling);
    r.artifacts["coupling"] = c.output;
  }
  if (reference_feasible(method, ga, c) && reference_feasible(method, gb, c)) {
    double pre = 0.0, solve_ms = 0.0;
    const GWResult ref = solve(reference_method(method), pre, solve_ms);
    r.metrics["reference"] = reference_method(method);
    r.metrics["reference_cost"] = ref.cost;
    r.metrics["relative_cost_error"] = std::abs(res.cost - ref.cost) / std::max(std::abs(ref.cost), 1e-300);
    r.extra_timings["reference_ms"] = pre + solve_ms;
  } else if (!is_bf(method)) {
    r.notices.push_back("brute-force comparison skipped: input too large or unsupported");
  }
  return r;
}

RunReport run_spectrum(const Config& c) {
  RunReport r = start_report(c);
  const Geometry g = load_geometry(c.input);
  const double lambda = first_lambda(c);
  const int n = g.cloud.size();
  if (c.eigenvalues < 1 || c.eigenvalues > n) throw UsageError("eigenvalues", "k must lie in [1, N]");
  if (c.features < 1) throw UsageError("features", "must be at least 1");

  auto start = Clock::now();
  const RFDecomposition d = build_decomposition(g.cloud, c.epsilon, c.features, {10.0, c.seed});
  r.preprocess_ms = ms_since(start);
  start = Clock::now();
  const Eigen::VectorXd values = diffusion_spectrum(d, lambda, c.eigenvalues);
  r.apply_ms = ms_since(start);
  r.metrics["eigenvalues"] = std::vector<double>(values.data(), values.data() + values.size());

  if (n <= c.bf_limit) {
    const SymmetricEigen e = symmetric_eigen(Eigen::MatrixXd(d.a * d.b.transpose()));
    std::vector<double> dense(n);
    for (int i = 0; i < n; ++i) dense[i] = std::exp(lambda * e.values[i]);
    std::sort(dense.begin(), dense.end());
    double err = 0.0;
    for (int i = 0; i < c.eigenvalues; ++i) err = std::max(err, std::abs(values[i] - dense[i]));
    r.metrics["max_abs_error_vs_dense"] = err;
  } else {
    r.notices.push_back("dense comparison skipped: input too large");
  }
  if (!c.output.empty()) {
    write_csv(c.output, values.transpose());
    r.artifacts["eigenvalues"] = c.output;
  }
  return r;
}

RunReport run(const Config& c) {
  RunReport r;
  if (c.command == "integrate")
    r = run_integrate(c);
  else if (c.command == "interpolate")
    r = run_interpolation_benchmark(c);
  else if (c.command == "barycenter")
    r = run_barycenter(c);
  else if (c.command == "gw")
    r = run_gw(c);
  else if (c.command == "spectrum")
    r = run_spectrum(c);
  else
    throw UsageError("command", "unknown command " + c.command);
  if (!c.report.empty()) write_text(c.report, r.dump());
  return r;
}

}  // namespace gfi::bench
