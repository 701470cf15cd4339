#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cvmem/scenarios.hpp"
#include "cvmem/special.hpp"

namespace {
constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitTolerance = 3;
}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cvmem: pulsed continuous-variable quantum memory simulator"};
  app.require_subcommand(1);

  CLI::App* run = app.add_subcommand(
      "run", "run a scenario and write its CSV/JSON artifacts");
  std::string scenario;
  std::string config_path;
  std::string out_dir;
  std::size_t grid_points = 0;
  double span = 0.0;
  double r = 0.0;
  double eta = 0.0;
  double gt0T = 0.0;
  run->add_option("--scenario", scenario,
                  "one of write-sweep, emission-profile, readout-sweep, "
                  "no-cloning, toy-equivalence, adiabatic-check");
  run->add_option("--config", config_path, "JSON config file (schema v1)");
  run->add_option("--out-dir", out_dir, "output directory (default '.')");
  run->add_option("--grid-points", grid_points, "time grid points (>= 256)");
  run->add_option("--span", span, "grid half-width in units of T (>= 8)");
  run->add_option("--r", r, "input squeezing parameter");
  run->add_option("--eta", eta, "memory efficiency in (0, 1]");
  run->add_option("--gt0T", gt0T, "dimensionless pulse area gt0*T");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    cvmem::ScenarioConfig config;
    if (!config_path.empty()) {
      config = cvmem::ScenarioConfig::from_json_file(config_path);
    }
    // Explicit flags override config-file values.
    if (run->count("--scenario") > 0) config.scenario = scenario;
    if (run->count("--out-dir") > 0) config.out_dir = out_dir;
    if (run->count("--grid-points") > 0) config.grid_points = grid_points;
    if (run->count("--span") > 0) config.span = span;
    if (run->count("--r") > 0) config.r = r;
    if (run->count("--eta") > 0) config.eta = eta;
    if (run->count("--gt0T") > 0) config.gt0T = gt0T;

    const cvmem::ScenarioResult res = cvmem::run_scenario(config);
    for (const std::string& path : res.outputs) {
      std::cout << "wrote " << path << "\n";
    }
    std::cout << res.summary << "\n";
    return kExitOk;
  } catch (const cvmem::tolerance_error& e) {
    std::cerr << "numerical tolerance failure: " << e.what() << "\n";
    return kExitTolerance;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::domain_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}
