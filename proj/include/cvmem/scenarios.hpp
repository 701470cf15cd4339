#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace cvmem {

/// Configuration for one scenario run. Optional physics fields fall back to
/// per-scenario defaults when unset (see README for the table).
struct ScenarioConfig {
  std::string scenario;
  std::optional<double> r;      // input squeezing
  std::optional<double> eta;    // memory efficiency
  std::optional<double> gt0T;   // dimensionless pulse area gt0 * T
  std::size_t grid_points = 4096;
  double span = 8.0;            // half-width of the time grid in units of T
  double atoms = 1e6;
  std::string out_dir = ".";

  /// Parses a JSON config file (requires "schema_version": 1); throws
  /// std::invalid_argument on unreadable files or schema violations.
  static ScenarioConfig from_json_file(const std::string& path);

  /// Checks scenario name, grid size (>= 256), span (>= 8 for gaussian
  /// scenarios) and physics ranges; throws std::invalid_argument.
  void validate() const;
};

struct ScenarioResult {
  std::vector<std::string> outputs;  // paths of files written
  std::string summary;               // one-line human-readable outcome
};

/// Runs a scenario and writes its CSV/JSON artifacts into out_dir
/// (created when missing). Deterministic: identical configs produce
/// byte-identical files.
ScenarioResult run_scenario(const ScenarioConfig& config);

}  // namespace cvmem
