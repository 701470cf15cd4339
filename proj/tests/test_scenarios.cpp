// End-to-end checks of the scenario runners: artifacts exist, values match
// the closed forms they plot, runs are deterministic, and the command-line
// front end maps failures to its documented exit codes.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <json.hpp>

#include "cvmem/model.hpp"
#include "cvmem/scenarios.hpp"
#include "doctest.h"

using namespace cvmem;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& leaf) {
  const fs::path dir = fs::temp_directory_path() / "cvmem_scenario_tests" / leaf;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  REQUIRE(is.good());
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

struct Csv {
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

Csv parse_csv(const fs::path& path) {
  Csv csv;
  std::istringstream is(slurp(path));
  std::string line;
  bool header_done = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line.front() == '#') {
      csv.comments.push_back(line);
      continue;
    }
    std::istringstream cells(line);
    std::string cell;
    if (!header_done) {
      while (std::getline(cells, cell, ',')) csv.header.push_back(cell);
      header_done = true;
      continue;
    }
    std::vector<double> row;
    while (std::getline(cells, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
    REQUIRE(row.size() == csv.header.size());
    csv.rows.push_back(std::move(row));
  }
  return csv;
}

int run_cli(const std::string& args, const fs::path& dir,
            std::string* out = nullptr, std::string* err = nullptr) {
  const fs::path out_path = dir / "cli_stdout.txt";
  const fs::path err_path = dir / "cli_stderr.txt";
  const std::string cmd = std::string(CVMEM_CLI_PATH) + " " + args + " > " +
                          out_path.string() + " 2> " + err_path.string();
  const int status = std::system(cmd.c_str());
  if (out) *out = slurp(out_path);
  if (err) *err = slurp(err_path);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("write sweep reports the saturating efficiency for each pulse area") {
  const fs::path dir = fresh_dir("write_sweep");
  ScenarioConfig c;
  c.scenario = "write-sweep";
  c.grid_points = 256;
  c.out_dir = dir.string();
  const ScenarioResult res = run_scenario(c);
  REQUIRE(res.outputs.size() == 1);
  CHECK(res.summary.find("write-sweep") != std::string::npos);

  const Csv csv = parse_csv(dir / "write-sweep.csv");
  REQUIRE(csv.header.size() == 7);
  CHECK(csv.header[0] == "t_over_T");
  CHECK(csv.header[1] == "xi");
  CHECK(csv.header[2] == "eff_ratio_a0.1");
  CHECK(csv.header[6] == "eff_ratio_a10");
  REQUIRE(csv.rows.size() == 256);

  // Every efficiency column saturates at 1 - e^{-2a} and is monotone in t.
  const std::vector<double> areas = {0.1, 0.5, 1.0, 5.0, 10.0};
  const std::vector<double>& last = csv.rows.back();
  CHECK(last[0] == 8.0);
  for (std::size_t k = 0; k < areas.size(); ++k) {
    CHECK(std::abs(last[2 + k] - (-std::expm1(-2.0 * areas[k]))) < 1e-9);
    for (std::size_t i = 1; i < csv.rows.size(); ++i) {
      CHECK(csv.rows[i][2 + k] >= csv.rows[i - 1][2 + k] - 1e-14);
    }
  }
  // The envelope column is the unit-width gaussian.
  CHECK(csv.rows[128][1] ==
        doctest::Approx(std::exp(-csv.rows[128][0] * csv.rows[128][0]) /
                        std::sqrt(std::acos(-1.0)))
            .epsilon(1e-10));
}

TEST_CASE("emission profile peaks where the closed-form delay says") {
  const fs::path dir = fresh_dir("emission_profile");
  ScenarioConfig c;
  c.scenario = "emission-profile";
  c.grid_points = 1025;
  c.out_dir = dir.string();
  const ScenarioResult res = run_scenario(c);
  REQUIRE(res.outputs.size() == 2);

  nlohmann::json j = nlohmann::json::parse(slurp(dir / "emission-profile_summary.json"));
  CHECK(j["schema_version"] == 1);
  CHECK(j["gt0T"].get<double>() == 5.0);  // scenario default
  const double t0 = j["peak_delay_over_T"].get<double>();
  CHECK(t0 == doctest::Approx(1.012332103230482).epsilon(1e-9));
  CHECK(j["mode_norm_closed"].get<double>() ==
        doctest::Approx(-std::expm1(-10.0)).epsilon(1e-12));
  CHECK(std::abs(j["mode_norm_grid"].get<double>() -
                 j["mode_norm_closed"].get<double>()) < 1e-5);

  const Csv csv = parse_csv(dir / "emission-profile.csv");
  REQUIRE(csv.header.size() == 4);
  REQUIRE(csv.rows.size() == 1025);
  std::size_t arg = 0;
  for (std::size_t i = 0; i < csv.rows.size(); ++i) {
    if (csv.rows[i][1] > csv.rows[arg][1]) arg = i;
  }
  CHECK(csv.rows[arg][1] == 1.0);  // peak-normalized
  const double spacing = csv.rows[1][0] - csv.rows[0][0];
  CHECK(std::abs(csv.rows[arg][0] - (-t0)) <= 2.0 * spacing);
  // The shifted envelope column is the envelope advanced by t0.
  CHECK(csv.rows[arg][3] ==
        doctest::Approx(std::exp(-std::pow(csv.rows[arg][0] + t0, 2)) /
                        std::sqrt(std::acos(-1.0)))
            .epsilon(1e-10));
}

TEST_CASE("readout sweep tabulates delayed and matched efficiency ratios") {
  const fs::path dir = fresh_dir("readout_sweep");
  ScenarioConfig c;
  c.scenario = "readout-sweep";
  c.out_dir = dir.string();
  const ScenarioResult res = run_scenario(c);
  REQUIRE(res.outputs.size() == 2);

  const Csv csv = parse_csv(dir / "readout-sweep.csv");
  REQUIRE(csv.header.size() == 3);
  REQUIRE(csv.rows.size() == 80);
  CHECK(csv.rows.front()[0] == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(csv.rows.back()[0] == doctest::Approx(10.0).epsilon(1e-12));
  for (const std::vector<double>& row : csv.rows) {
    // matched column is the closed-form mode norm
    CHECK(row[2] == doctest::Approx(-std::expm1(-2.0 * row[0])).epsilon(1e-12));
    // the optimized-delay envelope LO can never beat the matched LO
    CHECK(row[1] <= row[2] + 1e-9);
    CHECK(row[1] > 0.0);
  }

  nlohmann::json j = nlohmann::json::parse(slurp(dir / "readout-sweep_summary.json"));
  CHECK(j["schema_version"] == 1);
  CHECK(j["sweep_points"] == 80);
  const double best = j["max_eff_ratio"].get<double>();
  CHECK(best == doctest::Approx(0.9607).epsilon(2e-3));
  const double arg = j["argmax_gt0T"].get<double>();
  CHECK(arg > 1.5);
  CHECK(arg < 3.5);
}

TEST_CASE("windowed write output plus memory variance conserves the squeezing budget") {
  const fs::path dir = fresh_dir("no_cloning");
  ScenarioConfig c;
  c.scenario = "no-cloning";
  c.grid_points = 1024;
  c.out_dir = dir.string();
  const ScenarioResult res = run_scenario(c);
  REQUIRE(res.outputs.size() == 1);

  const Csv csv = parse_csv(dir / "no-cloning.csv");
  REQUIRE(csv.header.size() == 4);
  REQUIRE(csv.rows.size() == 65);
  const double expected = 1.0 + std::exp(-2.0);  // r defaults to 1
  for (const std::vector<double>& row : csv.rows) {
    // %.12g quantization allows ~1e-12 relative slack between the printed
    // sum and the sum of the printed addends.
    CHECK(row[1] + row[2] == doctest::Approx(row[3]).epsilon(1e-11));
    CHECK(std::abs(row[3] - expected) < 1e-4);
  }
  // Early windows: memory still in vacuum, window output empty of signal.
  CHECK(csv.rows.front()[1] == doctest::Approx(1.0).epsilon(1e-9));
  // Late windows: memory holds the input diluted by the unabsorbed fraction
  // e^{-2 a_inf} (eta = 1, a_inf = 2.5 here).
  const double res_vac = std::exp(-5.0);
  CHECK(csv.rows.back()[1] ==
        doctest::Approx(res_vac + (1.0 - res_vac) * std::exp(-2.0))
            .epsilon(1e-6));
}

TEST_CASE("toy equivalence scenario reports exact agreement at unit efficiency") {
  const fs::path dir = fresh_dir("toy_eq");
  ScenarioConfig c;
  c.scenario = "toy-equivalence";
  c.out_dir = dir.string();
  const ScenarioResult res = run_scenario(c);
  REQUIRE(res.outputs.size() == 1);
  nlohmann::json j = nlohmann::json::parse(slurp(dir / "toy-equivalence.json"));
  CHECK(j["schema_version"] == 1);
  CHECK(j["eta"].get<double>() == 1.0);
  CHECK(j["pass"].get<bool>());
  CHECK(j["max_kernel_deviation"].get<double>() <= 1e-12);
  CHECK(j["max_variance_deviation"].get<double>() <= 1e-12);
  CHECK_FALSE(j["transmission_warning"].get<bool>());
}

TEST_CASE("adiabatic check converges toward the coarse-grained law") {
  const fs::path dir = fresh_dir("adiabatic");
  ScenarioConfig c;
  c.scenario = "adiabatic-check";
  c.out_dir = dir.string();
  const ScenarioResult res = run_scenario(c);
  REQUIRE(res.outputs.size() == 1);

  const Csv csv = parse_csv(dir / "adiabatic-check.csv");
  REQUIRE(csv.rows.size() == 4);
  CHECK(csv.rows[0][0] == 10.0);
  CHECK(csv.rows[3][0] == 1000.0);
  for (std::size_t i = 1; i < csv.rows.size(); ++i) {
    CHECK(csv.rows[i][3] < csv.rows[i - 1][3]);  // error shrinks with separation
    CHECK(csv.rows[i][2] == csv.rows[0][2]);     // same reduced reference
  }
  CHECK(csv.rows[3][3] < 1e-4);
  CHECK(csv.rows[0][3] < 1e-2);
}

TEST_CASE("identical configurations produce byte-identical artifacts") {
  ScenarioConfig c;
  c.scenario = "emission-profile";
  c.grid_points = 512;
  for (const char* leaf : {"det_a", "det_b"}) {
    const fs::path dir = fresh_dir(leaf);
    c.out_dir = dir.string();
    run_scenario(c);
  }
  const fs::path base = fs::temp_directory_path() / "cvmem_scenario_tests";
  CHECK(slurp(base / "det_a" / "emission-profile.csv") ==
        slurp(base / "det_b" / "emission-profile.csv"));
  CHECK(slurp(base / "det_a" / "emission-profile_summary.json") ==
        slurp(base / "det_b" / "emission-profile_summary.json"));
}

TEST_CASE("configuration validation rejects out-of-range requests") {
  ScenarioConfig c;
  c.scenario = "no-such-scenario";
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.scenario = "write-sweep";
  c.grid_points = 128;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.grid_points = 256;
  c.span = 4.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.span = 8.0;
  c.eta = 1.5;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.eta = 0.5;
  c.gt0T = -1.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.gt0T = 1.0;
  c.atoms = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.atoms = 1e6;
  c.validate();  // now everything is in range
}

TEST_CASE("json config files round-trip every field and enforce the schema tag") {
  const fs::path dir = fresh_dir("config");
  const fs::path good = dir / "good.json";
  {
    std::ofstream os(good);
    os << R"({"schema_version": 1, "scenario": "write-sweep", "r": 0.7,
              "eta": 0.9, "gt0T": 1.25, "grid_points": 300, "span": 9.5,
              "atoms": 12345.0, "out_dir": "somewhere"})";
  }
  const ScenarioConfig c = ScenarioConfig::from_json_file(good.string());
  CHECK(c.scenario == "write-sweep");
  CHECK(c.r.value() == 0.7);
  CHECK(c.eta.value() == 0.9);
  CHECK(c.gt0T.value() == 1.25);
  CHECK(c.grid_points == 300);
  CHECK(c.span == 9.5);
  CHECK(c.atoms == 12345.0);
  CHECK(c.out_dir == "somewhere");

  const fs::path no_tag = dir / "no_tag.json";
  {
    std::ofstream os(no_tag);
    os << R"({"scenario": "write-sweep"})";
  }
  CHECK_THROWS_AS(ScenarioConfig::from_json_file(no_tag.string()),
                  std::invalid_argument);
  const fs::path wrong_tag = dir / "wrong_tag.json";
  {
    std::ofstream os(wrong_tag);
    os << R"({"schema_version": 2, "scenario": "write-sweep"})";
  }
  CHECK_THROWS_AS(ScenarioConfig::from_json_file(wrong_tag.string()),
                  std::invalid_argument);
  const fs::path broken = dir / "broken.json";
  {
    std::ofstream os(broken);
    os << "{ not json";
  }
  CHECK_THROWS_AS(ScenarioConfig::from_json_file(broken.string()),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      ScenarioConfig::from_json_file((dir / "missing.json").string()),
      std::invalid_argument);
}

TEST_CASE("cli runs a scenario and reports the files it wrote") {
  const fs::path dir = fresh_dir("cli_ok");
  std::string out;
  const int code =
      run_cli("run --scenario write-sweep --grid-points 256 --out-dir " +
                  (dir / "artifacts").string(),
              dir, &out);
  CHECK(code == 0);
  CHECK(out.find("wrote ") != std::string::npos);
  CHECK(out.find("write-sweep.csv") != std::string::npos);
  CHECK(fs::exists(dir / "artifacts" / "write-sweep.csv"));
}

TEST_CASE("cli maps validation failures to exit code 2") {
  const fs::path dir = fresh_dir("cli_bad");
  std::string err;
  CHECK(run_cli("run --scenario no-such-thing", dir, nullptr, &err) == 2);
  CHECK(err.find("unknown scenario") != std::string::npos);
  CHECK(run_cli("run --scenario write-sweep --grid-points 10", dir) == 2);
  CHECK(run_cli("run --no-such-flag", dir) == 2);
  CHECK(run_cli("", dir) == 2);  // a subcommand is required

  // Unwritable output directory: parent is a regular file.
  const fs::path blocker = dir / "blocker";
  std::ofstream(blocker) << "x";
  CHECK(run_cli("run --scenario write-sweep --grid-points 256 --out-dir " +
                    (blocker / "sub").string(),
                dir) == 2);
}

TEST_CASE("cli help exits cleanly") {
  const fs::path dir = fresh_dir("cli_help");
  std::string out;
  CHECK(run_cli("--help", dir, &out) == 0);
  CHECK(out.find("run") != std::string::npos);
}

TEST_CASE("cli flags override config values while unset fields fall through") {
  const fs::path dir = fresh_dir("cli_override");
  const fs::path cfg = dir / "config.json";
  const fs::path dir_a = dir / "from_config";
  const fs::path dir_b = dir / "from_flag";
  {
    std::ofstream os(cfg);
    os << R"({"schema_version": 1, "scenario": "write-sweep", "gt0T": 1.0,
              "grid_points": 512, "out_dir": ")"
       << dir_a.string() << R"("})";
  }
  const int code = run_cli("run --config " + cfg.string() +
                               " --scenario emission-profile --out-dir " +
                               dir_b.string(),
                           dir);
  CHECK(code == 0);
  CHECK_FALSE(fs::exists(dir_a));
  REQUIRE(fs::exists(dir_b / "emission-profile_summary.json"));
  nlohmann::json j =
      nlohmann::json::parse(slurp(dir_b / "emission-profile_summary.json"));
  // gt0T came from the config file, not the emission-profile default of 5.
  CHECK(j["gt0T"].get<double>() == 1.0);
}
