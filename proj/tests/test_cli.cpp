#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "zocoop/cli.hpp"

namespace {

namespace fs = std::filesystem;

int invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "zocoop");
  std::vector<char*> argv;
  argv.reserve(args.size());
  for (auto& a : args) argv.push_back(a.data());
  return zocoop::cli_run(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string write_config(const std::string& name, const std::string& body) {
  const std::string dir = "/tmp/zocoop_cli";
  fs::create_directories(dir);
  const std::string path = dir + "/" + name;
  std::ofstream out(path);
  out << body;
  return path;
}

const char* kSmallRun = R"({
  "problem": {"name": "separable_quadratic"},
  "partition": {"agents": 2, "block_dim": 1},
  "step": {"kind": "power_law", "base": 0.1, "exponent": 0.5},
  "smoothing": {"kind": "power_law", "base": 0.01, "exponent": 0.25},
  "delay": {"kind": "uniform_random", "bound": 2},
  "horizon": 50,
  "trials": 2,
  "seed": 11,
  "init": {"kind": "constant", "value": 2.0},
  "output": "/tmp/zocoop_cli/out_run"
})";

}  // namespace

TEST_CASE("run executes a config and exports the csv set") {
  fs::remove_all("/tmp/zocoop_cli/out_run");
  const std::string config = write_config("small.json", kSmallRun);

  CHECK(invoke({"run", config, "--quiet"}) == 0);
  CHECK(fs::exists("/tmp/zocoop_cli/out_run/rounds.csv"));
  CHECK(fs::exists("/tmp/zocoop_cli/out_run/summary.csv"));
  CHECK(fs::exists("/tmp/zocoop_cli/out_run/trial_000.csv"));
  CHECK(fs::exists("/tmp/zocoop_cli/out_run/trial_001.csv"));
  CHECK_FALSE(fs::exists("/tmp/zocoop_cli/out_run/trial_002.csv"));
}

TEST_CASE("identical invocations produce identical bytes") {
  const std::string config = write_config("small.json", kSmallRun);

  REQUIRE(invoke({"run", config, "--quiet", "--out", "/tmp/zocoop_cli/rep_a"}) == 0);
  REQUIRE(invoke({"run", config, "--quiet", "--out", "/tmp/zocoop_cli/rep_b"}) == 0);
  CHECK(slurp("/tmp/zocoop_cli/rep_a/rounds.csv") ==
        slurp("/tmp/zocoop_cli/rep_b/rounds.csv"));
  CHECK(slurp("/tmp/zocoop_cli/rep_a/summary.csv") ==
        slurp("/tmp/zocoop_cli/rep_b/summary.csv"));

  REQUIRE(invoke({"run", config, "--quiet", "--out", "/tmp/zocoop_cli/rep_c",
                  "--seed", "99"}) == 0);
  CHECK(slurp("/tmp/zocoop_cli/rep_a/rounds.csv") !=
        slurp("/tmp/zocoop_cli/rep_c/rounds.csv"));
}

TEST_CASE("trial count overrides extend the exported set") {
  const std::string config = write_config("small.json", kSmallRun);
  REQUIRE(invoke({"run", config, "--quiet", "--out", "/tmp/zocoop_cli/out_tr",
                  "--trials", "3"}) == 0);
  CHECK(fs::exists("/tmp/zocoop_cli/out_tr/trial_002.csv"));
}

TEST_CASE("configuration errors exit with status one") {
  const std::string bad = write_config("bad_alpha.json", R"({
    "problem": {"name": "separable_quadratic"},
    "partition": {"agents": 2, "block_dim": 1},
    "step": {"kind": "power_law", "base": 0.1, "exponent": 1.2},
    "smoothing": {"kind": "power_law", "base": 0.01, "exponent": 0.25},
    "delay": {"kind": "zero"},
    "horizon": 50
  })");
  CHECK(invoke({"run", bad, "--quiet"}) == 1);
  CHECK(invoke({"run", "/tmp/zocoop_cli/no_such.json", "--quiet"}) == 1);
  CHECK(invoke({"run"}) == 1);
  CHECK(invoke({}) == 1);
}

TEST_CASE("aborting runs exit with status two but keep their exports") {
  const std::string config = write_config("underflow.json", R"({
    "problem": {"name": "separable_quadratic"},
    "partition": {"agents": 2, "block_dim": 1},
    "step": {"kind": "power_law", "base": 0.1, "exponent": 0.5},
    "smoothing": {"kind": "power_law", "base": 1e-7, "exponent": 0.5},
    "delay": {"kind": "zero"},
    "horizon": 300,
    "output": "/tmp/zocoop_cli/out_abort"
  })");
  fs::remove_all("/tmp/zocoop_cli/out_abort");
  CHECK(invoke({"run", config, "--quiet"}) == 2);
  CHECK(fs::exists("/tmp/zocoop_cli/out_abort/rounds.csv"));
}

TEST_CASE("sweeps produce one directory per cell") {
  const std::string config = write_config("sweep.json", R"({
    "problem": {"name": "separable_quadratic"},
    "partition": {"agents": 2, "block_dim": 1},
    "step": {"kind": "power_law", "base": 0.1, "exponent": 0.5},
    "smoothing": {"kind": "power_law", "base": 0.01, "exponent": 0.25},
    "delay": {"kind": "zero"},
    "horizon": 30,
    "trials": 1,
    "output": "/tmp/zocoop_cli/out_sweep",
    "sweep": {
      "step": [
        {"kind": "constant", "base": 0.05},
        {"kind": "power_law", "base": 0.1, "exponent": 0.5}
      ],
      "delay": [
        {"kind": "zero"},
        {"kind": "uniform_random", "bound": 2}
      ]
    }
  })");
  fs::remove_all("/tmp/zocoop_cli/out_sweep");
  CHECK(invoke({"sweep", config, "--quiet"}) == 0);
  CHECK(fs::exists("/tmp/zocoop_cli/out_sweep/cell_0_0_0/rounds.csv"));
  CHECK(fs::exists("/tmp/zocoop_cli/out_sweep/cell_0_0_1/rounds.csv"));
  CHECK(fs::exists("/tmp/zocoop_cli/out_sweep/cell_1_0_0/rounds.csv"));
  CHECK(fs::exists("/tmp/zocoop_cli/out_sweep/cell_1_0_1/rounds.csv"));

  const std::string bad_cell = write_config("sweep_bad.json", R"({
    "problem": {"name": "separable_quadratic"},
    "partition": {"agents": 2, "block_dim": 1},
    "step": {"kind": "power_law", "base": 0.1, "exponent": 0.5},
    "smoothing": {"kind": "power_law", "base": 0.01, "exponent": 0.25},
    "delay": {"kind": "zero"},
    "horizon": 30,
    "output": "/tmp/zocoop_cli/out_sweep_bad",
    "sweep": {"step": [{"kind": "power_law", "base": 0.1, "exponent": 1.5}]}
  })");
  fs::remove_all("/tmp/zocoop_cli/out_sweep_bad");
  CHECK(invoke({"sweep", bad_cell, "--quiet"}) == 1);
  CHECK_FALSE(fs::exists("/tmp/zocoop_cli/out_sweep_bad"));
}

TEST_CASE("plot aggregates an exported rounds table") {
  const std::string config = write_config("small.json", kSmallRun);
  REQUIRE(invoke({"run", config, "--quiet", "--out", "/tmp/zocoop_cli/out_plot"}) == 0);
  CHECK(invoke({"plot", "/tmp/zocoop_cli/out_plot/rounds.csv", "--out",
                "/tmp/zocoop_cli/out_plot"}) == 0);
  CHECK(fs::exists("/tmp/zocoop_cli/out_plot/plot.dat"));

  std::istringstream lines(slurp("/tmp/zocoop_cli/out_plot/plot.dat"));
  std::int64_t t = -1;
  double mean = 0.0;
  double sd = 0.0;
  REQUIRE((lines >> t >> mean >> sd));
  CHECK(t == 0);

  CHECK(invoke({"plot", "/tmp/zocoop_cli/missing.csv"}) == 1);
}

TEST_CASE("the invariant suite passes on its default seed") {
  CHECK(invoke({"check", "--seed", "2024", "--quiet"}) == 0);
}