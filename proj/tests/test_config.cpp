#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "zocoop/config.hpp"
#include "zocoop/errors.hpp"
#include "zocoop/wind_farm.hpp"

using zocoop::DelayKind;
using zocoop::InitSpec;
using zocoop::ScheduleKind;

namespace {

constexpr const char* kQuadratic = R"({
  "problem": {"name": "separable_quadratic", "domain_radius": 5.0},
  "partition": {"agents": 2, "block_dim": 2},
  "step": {"kind": "power_law", "base": 0.1, "exponent": 0.5},
  "smoothing": {"kind": "power_law", "base": 0.01, "exponent": 0.25},
  "delay": {"kind": "uniform_random", "bound": 3, "seed": 9},
  "horizon": 100,
  "trials": 4,
  "seed": 2024,
  "init": {"kind": "vector", "values": [1.0, 2.0, 3.0, 4.0]},
  "output": "results",
  "trace": true,
  "smoothing_floor": 1e-9
})";

void expect_config_error(const std::string& text, const std::string& needle) {
  try {
    zocoop::parse_experiment_json(text, "test.json");
    FAIL("expected a config error mentioning '" << needle << "'");
  } catch (const zocoop::ConfigError& e) {
    CHECK(std::string(e.what()).find(needle) != std::string::npos);
  }
}

std::string drop_line(const std::string& text, const std::string& needle) {
  std::string out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find(needle) != std::string::npos) continue;
    out += line;
    out += '\n';
  }
  return out;
}

}  // namespace

TEST_CASE("a full experiment file parses into a runnable config") {
  auto loaded = zocoop::parse_experiment_json(kQuadratic, "test.json");
  const auto& config = loaded.config;

  CHECK(config.problem->name() == "separable_quadratic");
  CHECK(config.problem->partition().agent_count() == 2);
  CHECK(config.problem->partition().total() == 4);
  CHECK(config.problem->meta().domain_radius == 5.0);

  CHECK(config.schedules.step.kind == ScheduleKind::kPowerLaw);
  CHECK(config.schedules.step.base == 0.1);
  CHECK(config.schedules.smoothing.exponent == 0.25);
  CHECK(config.schedules.theorem_applies);

  CHECK(config.delay.kind == DelayKind::kUniformRandom);
  CHECK(config.delay.bound == 3);
  CHECK(config.delay.seed_tag == 9);

  CHECK(config.horizon == 100);
  CHECK(config.trials == 4);
  CHECK(config.master_seed == 2024);
  CHECK(config.init.kind == InitSpec::Kind::kExplicit);
  CHECK(config.init.vector.size() == 4);
  CHECK(config.smoothing_floor == 1e-9);
  CHECK(config.record_trace);
  CHECK(loaded.output_dir == "results");
}

TEST_CASE("wind farm configs need no partition block") {
  const char* text = R"({
    "problem": {"name": "wind_farm", "turbines": 3, "spacing": 4.0},
    "step": {"kind": "constant", "base": 0.05},
    "smoothing": {"kind": "constant", "base": 0.001},
    "delay": {"kind": "zero"},
    "horizon": 10
  })";
  auto loaded = zocoop::parse_experiment_json(text, "farm.json");
  CHECK(loaded.config.problem->partition().agent_count() == 3);
  CHECK_FALSE(loaded.config.schedules.theorem_applies);

  const auto* farm =
      dynamic_cast<const zocoop::WindFarm*>(loaded.config.problem.get());
  REQUIRE(farm != nullptr);
  CHECK(farm->positions() == std::vector<double>{0.0, 4.0, 8.0});
  CHECK(loaded.output_dir == "out");
}

TEST_CASE("relative layout and matrix paths resolve against the config file") {
  const std::string dir = "/tmp/zocoop_cfg_rel";
  std::filesystem::create_directories(dir);
  {
    std::ofstream layout(dir + "/layout.csv");
    layout << "index,position\n0,0.0\n1,6.0\n";
  }
  {
    std::ofstream matrix(dir + "/delays.csv");
    matrix << "0,1\n1,0\n";
  }
  {
    std::ofstream cfg(dir + "/cfg.json");
    cfg << R"({
      "problem": {"name": "wind_farm", "layout_csv": "layout.csv"},
      "step": {"kind": "power_law", "base": 0.1, "exponent": 0.51},
      "smoothing": {"kind": "power_law", "base": 0.01, "exponent": 0.25},
      "delay": {"kind": "fixed_matrix", "bound": 1, "matrix_csv": "delays.csv"},
      "horizon": 5
    })";
  }

  auto loaded = zocoop::load_experiment_file(dir + "/cfg.json");
  const auto* farm =
      dynamic_cast<const zocoop::WindFarm*>(loaded.config.problem.get());
  REQUIRE(farm != nullptr);
  CHECK(farm->positions() == std::vector<double>{0.0, 6.0});
  CHECK(loaded.config.delay.matrix(0, 1) == 1);
  CHECK(loaded.config.delay.matrix(1, 1) == 0);

  CHECK_THROWS_AS(zocoop::load_experiment_file(dir + "/absent.json"), zocoop::IoError);
}

TEST_CASE("inline delay matrices must be square integer grids") {
  const char* good = R"({
    "problem": {"name": "separable_quadratic"},
    "partition": {"agents": 2, "block_dim": 1},
    "step": {"kind": "power_law", "base": 0.1, "exponent": 0.5},
    "smoothing": {"kind": "power_law", "base": 0.01, "exponent": 0.25},
    "delay": {"kind": "fixed_matrix", "bound": 2, "matrix": [[0, 2], [1, 0]]},
    "horizon": 10
  })";
  auto loaded = zocoop::parse_experiment_json(good, "m.json");
  CHECK(loaded.config.delay.matrix(0, 1) == 2);

  expect_config_error(R"({
    "problem": {"name": "separable_quadratic"},
    "partition": {"agents": 2, "block_dim": 1},
    "step": {"kind": "power_law", "base": 0.1, "exponent": 0.5},
    "smoothing": {"kind": "power_law", "base": 0.01, "exponent": 0.25},
    "delay": {"kind": "fixed_matrix", "bound": 2, "matrix": [[0, 2, 1], [1, 0, 0]]},
    "horizon": 10
  })",
                      "square");

  expect_config_error(R"({
    "problem": {"name": "separable_quadratic"},
    "partition": {"agents": 2, "block_dim": 1},
    "step": {"kind": "power_law", "base": 0.1, "exponent": 0.5},
    "smoothing": {"kind": "power_law", "base": 0.01, "exponent": 0.25},
    "delay": {"kind": "fixed_matrix", "bound": 2, "matrix": [[0, 0.5], [1, 0]]},
    "horizon": 10
  })",
                      "integer");
}

TEST_CASE("diagnostics name the offending field") {
  expect_config_error(drop_line(kQuadratic, "\"horizon\""), "horizon");
  expect_config_error(drop_line(kQuadratic, "\"step\""), "step");
  expect_config_error(drop_line(kQuadratic, "\"problem\""), "problem");

  std::string bad_horizon = kQuadratic;
  bad_horizon.replace(bad_horizon.find("\"horizon\": 100"), 14, "\"horizon\": 1.5");
  expect_config_error(bad_horizon, "horizon");

  expect_config_error(R"({
    "problem": {"name": "no_such_problem"},
    "partition": {"agents": 1, "block_dim": 1},
    "step": {"kind": "power_law", "base": 0.1, "exponent": 0.5},
    "smoothing": {"kind": "power_law", "base": 0.01, "exponent": 0.25},
    "delay": {"kind": "zero"},
    "horizon": 10
  })",
                      "problem");

  expect_config_error(R"({
    "problem": {"name": "linear_probe", "a": [1.0, 2.0, 3.0]},
    "partition": {"agents": 2, "block_dim": 1},
    "step": {"kind": "power_law", "base": 0.1, "exponent": 0.5},
    "smoothing": {"kind": "power_law", "base": 0.01, "exponent": 0.25},
    "delay": {"kind": "zero"},
    "horizon": 10
  })",
                      "problem.a");
}

TEST_CASE("schedule exponents outside the admissible range are rejected") {
  std::string bad = kQuadratic;
  bad.replace(bad.find("\"exponent\": 0.5"), 15, "\"exponent\": 1.2");
  CHECK_THROWS_AS(zocoop::parse_experiment_json(bad, "test.json"),
                  zocoop::OutOfRangeExponent);
}

TEST_CASE("init blocks parse all three kinds") {
  std::string constant = kQuadratic;
  constant.replace(constant.find(R"("init": {"kind": "vector", "values": [1.0, 2.0, 3.0, 4.0]},)"),
                   std::string(R"("init": {"kind": "vector", "values": [1.0, 2.0, 3.0, 4.0]},)").size(),
                   R"("init": {"kind": "constant", "value": 0.25},)");
  auto loaded = zocoop::parse_experiment_json(constant, "test.json");
  CHECK(loaded.config.init.kind == InitSpec::Kind::kConstant);
  CHECK(loaded.config.init.fill == 0.25);

  std::string ball = kQuadratic;
  ball.replace(ball.find(R"("init": {"kind": "vector", "values": [1.0, 2.0, 3.0, 4.0]},)"),
               std::string(R"("init": {"kind": "vector", "values": [1.0, 2.0, 3.0, 4.0]},)").size(),
               R"("init": {"kind": "random_ball", "radius": 2.0},)");
  auto loaded_ball = zocoop::parse_experiment_json(ball, "test.json");
  CHECK(loaded_ball.config.init.kind == InitSpec::Kind::kRandomBall);
  CHECK(loaded_ball.config.init.radius == 2.0);

  std::string bad_kind = kQuadratic;
  bad_kind.replace(bad_kind.find(R"("init": {"kind": "vector")"),
                   std::string(R"("init": {"kind": "vector")").size(),
                   R"("init": {"kind": "warp")");
  expect_config_error(bad_kind, "init");

  std::string wrong_len = kQuadratic;
  wrong_len.replace(wrong_len.find("[1.0, 2.0, 3.0, 4.0]"), 20, "[1.0, 2.0]");
  expect_config_error(wrong_len, "init");
}

TEST_CASE("sweep axes parse into variant lists") {
  const char* text = R"({
    "problem": {"name": "separable_quadratic"},
    "partition": {"agents": 2, "block_dim": 1},
    "step": {"kind": "power_law", "base": 0.1, "exponent": 0.5},
    "smoothing": {"kind": "power_law", "base": 0.01, "exponent": 0.25},
    "delay": {"kind": "zero"},
    "horizon": 10,
    "sweep": {
      "step": [
        {"kind": "constant", "base": 0.05},
        {"kind": "constant", "base": 0.005}
      ],
      "delay": [
        {"kind": "zero"},
        {"kind": "uniform_random", "bound": 2}
      ]
    }
  })";
  auto loaded = zocoop::parse_experiment_json(text, "sweep.json");
  REQUIRE(loaded.step_variants.size() == 2);
  CHECK(loaded.step_variants[1].base == 0.005);
  CHECK(loaded.smoothing_variants.empty());
  REQUIRE(loaded.delay_variants.size() == 2);
  CHECK(loaded.delay_variants[1].bound == 2);
}

TEST_CASE("malformed inputs fail with named diagnostics, never crashes") {
  const std::vector<std::string> garbage = {
      "",
      "{",
      "[1,2,3]",
      "null",
      "42",
      R"("a string")",
      R"({"problem": null})",
      R"({"problem": {"name": 7}})",
      R"({"problem": {"name": "wind_farm", "turbines": 0},
          "step": {"kind": "power_law", "base": 0.1, "exponent": 0.5},
          "smoothing": {"kind": "power_law", "base": 0.01, "exponent": 0.25},
          "delay": {"kind": "zero"}, "horizon": 10})",
      R"({"problem": {"name": "separable_quadratic"},
          "partition": {"dims": []},
          "step": {"kind": "power_law", "base": 0.1, "exponent": 0.5},
          "smoothing": {"kind": "power_law", "base": 0.01, "exponent": 0.25},
          "delay": {"kind": "zero"}, "horizon": 10})",
      R"({"problem": {"name": "separable_quadratic"},
          "partition": {"dims": [2, 0]},
          "step": {"kind": "power_law", "base": 0.1, "exponent": 0.5},
          "smoothing": {"kind": "power_law", "base": 0.01, "exponent": 0.25},
          "delay": {"kind": "zero"}, "horizon": 10})",
      R"({"problem": {"name": "separable_quadratic"},
          "partition": {"agents": 1, "block_dim": 1},
          "step": {"kind": "warp", "base": 0.1},
          "smoothing": {"kind": "power_law", "base": 0.01, "exponent": 0.25},
          "delay": {"kind": "zero"}, "horizon": 10})",
      R"({"problem": {"name": "separable_quadratic"},
          "partition": {"agents": 1, "block_dim": 1},
          "step": {"kind": "power_law", "base": 0.1, "exponent": 0.5},
          "smoothing": {"kind": "power_law", "base": 0.01, "exponent": 0.25},
          "delay": {"kind": "teleport"}, "horizon": 10})",
      R"({"problem": {"name": "separable_quadratic"},
          "partition": {"agents": 1, "block_dim": 1},
          "step": {"kind": "power_law", "base": 0.1, "exponent": 0.5},
          "smoothing": {"kind": "power_law", "base": 0.01, "exponent": 0.25},
          "delay": {"kind": "zero"}, "horizon": 10, "trials": -2})",
      R"({"problem": {"name": "separable_quadratic"},
          "partition": {"agents": 1, "block_dim": 1},
          "step": {"kind": "power_law", "base": 0.1, "exponent": 0.5},
          "smoothing": {"kind": "power_law", "base": 0.01, "exponent": 0.25},
          "delay": {"kind": "zero"}, "horizon": 10, "trace": "yes"})",
      R"({"problem": {"name": "separable_quadratic"},
          "partition": {"agents": 1, "block_dim": 1},
          "step": {"kind": "power_law", "base": 0.1, "exponent": 0.5},
          "smoothing": {"kind": "power_law", "base": 0.01, "exponent": 0.25},
          "delay": {"kind": "periodic_gossip", "period": 5, "bound": 2},
          "horizon": 10})",
  };
  for (const auto& text : garbage) {
    CHECK_THROWS_AS(zocoop::parse_experiment_json(text, "fuzz.json"),
                    zocoop::Error);
  }
}