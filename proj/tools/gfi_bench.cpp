// gfi_bench: field integration, interpolation, barycenter, GW and spectrum runs
// with JSON reports.

#include <iostream>

#include <CLI11.hpp>

#include "gfi/bench.hpp"

int main(int argc, char** argv) {
  gfi::bench::Config c;
  CLI::App app{"Graph field integration benchmarks"};
  app.add_option("command", c.command, "integrate | interpolate | barycenter | gw | spectrum")
      ->required()
      ->check(CLI::IsMember({"integrate", "interpolate", "barycenter", "gw", "spectrum"}));
  app.add_option("--input", c.input, "mesh (.off/.obj), point CSV, or gen:sphere:N / gen:grid:NX:NY / "
                                     "gen:torus:A:B / gen:icosphere:S")
      ->required();
  app.add_option("--input-b", c.input_b, "second structure for gw (defaults to --input)");
  app.add_option("--field", c.field, "field CSV, or normals | ones | coords")->capture_default_str();
  app.add_option("--method", c.methods, "bf, bf-diffusion, sf, rfd, tree-mst, tree-bartal[-K], tree-frt[-K]")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--kernel", c.kernel, "exp:LAMBDA or tabulated:PATH (shortest-path methods)");
  app.add_option("--epsilon", c.epsilon, "L1 neighborhood radius")->capture_default_str();
  app.add_option("--lambda", c.lambdas, "decay rate or diffusion time; a list makes a grid")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--features", c.features, "random features m")->capture_default_str();
  app.add_option("--unit-size", c.unit_size, "SF distance quantum")->capture_default_str();
  app.add_option("--threshold", c.threshold, "SF brute-force leaf size")->capture_default_str();
  app.add_option("--sep-size", c.sep_size, "SF separator anchors")->capture_default_str();
  app.add_option("--mask-fraction", c.mask_fraction, "masked share of vertices")->capture_default_str();
  app.add_option("--trees", c.trees, "trees per ensemble")->capture_default_str();
  app.add_option("--alpha", c.alpha, "fused GW weight")->capture_default_str();
  app.add_option("--max-iter", c.max_iter, "outer iterations")->capture_default_str();
  app.add_option("--inner-reg", c.inner_reg, "GW inner regularization (0: automatic)")->capture_default_str();
  app.add_option("--centers", c.centers, "synthesized barycenter inputs")->capture_default_str();
  app.add_option("--eigenvalues", c.eigenvalues, "spectrum size k")->capture_default_str();
  app.add_option("--mode", c.mode, "gw | fgw")->capture_default_str();
  app.add_option("--features-a", c.features_a, "fgw node features for --input");
  app.add_option("--features-b", c.features_b, "fgw node features for --input-b");
  app.add_flag("--random-labels", c.random_labels, "fgw with random binary labels");
  app.add_option("--bf-limit", c.bf_limit, "largest N compared against brute force")->capture_default_str();
  app.add_option("--seed", c.seed)->capture_default_str();
  app.add_option("--output", c.output, "result CSV");
  app.add_option("--report", c.report, "JSON report path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const gfi::bench::RunReport r = gfi::bench::run(c);
    if (c.report.empty()) std::cout << r.dump();
    return 0;
  } catch (const gfi::bench::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
