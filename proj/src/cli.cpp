#include "zocoop/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "zocoop/checks.hpp"
#include "zocoop/config.hpp"
#include "zocoop/errors.hpp"
#include "zocoop/metrics.hpp"

namespace zocoop {

namespace {

struct Overrides {
  std::optional<std::string> out;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

void apply_overrides(LoadedExperiment& exp, const Overrides& ov) {
  if (ov.out) exp.output_dir = *ov.out;
  if (ov.trials) exp.config.trials = *ov.trials;
  if (ov.seed) exp.config.master_seed = *ov.seed;
}

int report_and_export(const ExperimentResult& result, const std::string& dir,
                      bool quiet) {
  const ConvergenceSummary* summary_ptr = nullptr;
  ConvergenceSummary summary;
  try {
    summary = compute_summary(result.trials);
    summary_ptr = &summary;
  } catch (const Error&) {
    // No analytic gradients (or no completed trial): f-value traces only.
  }
  export_csv(result.trials, summary_ptr, dir);

  bool aborted = false;
  for (const auto& trial : result.trials) {
    if (trial.status != TrialStatus::kCompleted) {
      aborted = true;
      std::cerr << "trial " << trial.trial << " " << to_string(trial.status)
                << ": " << trial.abort_reason << "\n";
    }
  }
  if (!quiet) {
    std::cout << result.aggregate.trials_completed << "/"
              << result.trials.size() << " trials completed";
    if (result.aggregate.normalized_final_mean) {
      std::cout << ", final normalized objective "
                << format_double(*result.aggregate.normalized_final_mean)
                << " +- "
                << format_double(*result.aggregate.normalized_final_std);
    }
    if (result.aggregate.m_final_mean) {
      std::cout << ", final M "
                << format_double(*result.aggregate.m_final_mean) << " +- "
                << format_double(*result.aggregate.m_final_std);
    }
    if (summary_ptr != nullptr) {
      std::cout << ", fitted slope " << format_double(summary.fitted_slope);
    }
    std::cout << "\nwrote " << dir << "/rounds.csv\n";
  }
  return aborted ? 2 : 0;
}

int do_run(const std::string& config_path, const Overrides& ov) {
  LoadedExperiment exp;
  try {
    exp = load_experiment_file(config_path);
    apply_overrides(exp, ov);
    validate_config(exp.config);
  } catch (const Error& e) {
    std::cerr << config_path << ": " << e.what() << "\n";
    return 1;
  }
  try {
    const ExperimentResult result = run_experiment(exp.config);
    return report_and_export(result, exp.output_dir, ov.quiet);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
}

int do_sweep(const std::string& config_path, const Overrides& ov) {
  LoadedExperiment exp;
  std::vector<ExperimentConfig> cells;
  std::vector<std::string> dirs;
  try {
    exp = load_experiment_file(config_path);
    apply_overrides(exp, ov);

    std::vector<Schedule> steps = exp.step_variants;
    if (steps.empty()) steps.push_back(exp.config.schedules.step);
    std::vector<Schedule> smoothings = exp.smoothing_variants;
    if (smoothings.empty()) smoothings.push_back(exp.config.schedules.smoothing);
    std::vector<DelayModelSpec> delays = exp.delay_variants;
    if (delays.empty()) delays.push_back(exp.config.delay);

    // Validate every cell before running any of them.
    for (std::size_t i = 0; i < steps.size(); ++i) {
      for (std::size_t j = 0; j < smoothings.size(); ++j) {
        for (std::size_t k = 0; k < delays.size(); ++k) {
          ExperimentConfig cell = exp.config;
          cell.schedules = validate_schedule_pair(steps[i], smoothings[j]);
          cell.delay = delays[k];
          validate_config(cell);
          cells.push_back(std::move(cell));
          dirs.push_back(exp.output_dir + "/cell_" + std::to_string(i) + "_" +
                         std::to_string(j) + "_" + std::to_string(k));
        }
      }
    }
  } catch (const Error& e) {
    std::cerr << config_path << ": " << e.what() << "\n";
    return 1;
  }

  int exit_code = 0;
  try {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (!ov.quiet) std::cout << "cell " << dirs[c] << "\n";
      const ExperimentResult result = run_experiment(cells[c]);
      const int code = report_and_export(result, dirs[c], ov.quiet);
      exit_code = std::max(exit_code, code);
    }
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  return exit_code;
}

int do_check(std::uint64_t seed, bool quiet) {
  const auto results = run_all_checks(seed);
  bool all_pass = true;
  for (const auto& r : results) {
    all_pass = all_pass && r.pass;
    if (!quiet || !r.pass) {
      std::cout << (r.pass ? "PASS " : "FAIL ") << r.name;
      if (!r.detail.empty()) std::cout << ": " << r.detail;
      std::cout << "\n";
    }
  }
  return all_pass ? 0 : 2;
}

int do_plot(const std::string& csv_path, const std::optional<std::string>& out) {
  try {
    if (out) {
      std::filesystem::create_directories(*out);
      const std::string path = *out + "/plot.dat";
      std::ofstream file(path);
      if (!file) throw IoError("cannot write " + path);
      write_plot_table(csv_path, file);
      std::cout << "wrote " << path << "\n";
    } else {
      write_plot_table(csv_path, std::cout);
    }
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int cli_run(int argc, char** argv) {
  CLI::App app{"zeroth-order cooperative optimization under bounded delay"};
  app.require_subcommand(1);

  Overrides ov;
  std::string config_path;
  std::string csv_path;
  std::string out_dir;
  int trials = 0;
  std::uint64_t seed = 0;

  const auto add_common = [&](CLI::App* cmd, bool with_overrides) {
    cmd->add_flag("--quiet", ov.quiet, "suppress progress output");
    if (with_overrides) {
      cmd->add_option("--out", out_dir, "output directory override");
      cmd->add_option("--trials", trials, "trial count override")
          ->check(CLI::PositiveNumber);
      cmd->add_option("--seed", seed, "master seed override");
    }
  };

  auto* run_cmd =
      app.add_subcommand("run", "execute an experiment and export csv");
  run_cmd->add_option("config", config_path, "experiment json")->required();
  add_common(run_cmd, true);

  auto* sweep_cmd = app.add_subcommand(
      "sweep", "run the cartesian product of the config's sweep variants");
  sweep_cmd->add_option("config", config_path, "experiment json")->required();
  add_common(sweep_cmd, true);

  auto* check_cmd =
      app.add_subcommand("check", "run the estimator/delay invariant suite");
  check_cmd->add_option("--seed", seed, "suite seed");
  check_cmd->add_flag("--quiet", ov.quiet, "print failures only");

  auto* plot_cmd = app.add_subcommand(
      "plot", "aggregate a rounds.csv into a plot-ready mean/std table");
  plot_cmd->add_option("csv", csv_path, "rounds.csv path")->required();
  plot_cmd->add_option("--out", out_dir, "directory for plot.dat");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  for (CLI::App* cmd : {run_cmd, sweep_cmd}) {
    if (cmd->parsed()) {
      if (cmd->count("--out") > 0) ov.out = out_dir;
      if (cmd->count("--trials") > 0) ov.trials = trials;
      if (cmd->count("--seed") > 0) ov.seed = seed;
    }
  }

  if (run_cmd->parsed()) return do_run(config_path, ov);
  if (sweep_cmd->parsed()) return do_sweep(config_path, ov);
  if (check_cmd->parsed()) {
    return do_check(check_cmd->count("--seed") > 0 ? seed : 2024, ov.quiet);
  }
  if (plot_cmd->parsed()) {
    return do_plot(csv_path, plot_cmd->count("--out") > 0
                                 ? std::optional<std::string>(out_dir)
                                 : std::nullopt);
  }
  return 1;
}

}  // namespace zocoop
