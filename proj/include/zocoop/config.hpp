#ifndef ZOCOOP_CONFIG_HPP
#define ZOCOOP_CONFIG_HPP

#include <string>
#include <vector>

#include "zocoop/engine.hpp"

namespace zocoop {

/// A parsed experiment file: the base configuration, the output directory,
/// and any sweep variants (each variant replaces the corresponding base
/// field; the sweep is the cartesian product of the listed axes).
struct LoadedExperiment {
  ExperimentConfig config;
  std::string output_dir = "out";
  std::vector<Schedule> step_variants;
  std::vector<Schedule> smoothing_variants;
  std::vector<DelayModelSpec> delay_variants;
};

/// Parses and validates a JSON experiment description. Every parse or
/// validation failure throws ConfigError naming the offending field;
/// malformed input never crashes the process.
LoadedExperiment parse_experiment_json(const std::string& text,
                                       const std::string& origin);

/// Reads the file and parses it; relative layout/matrix paths inside the
/// config resolve against the config file's directory.
LoadedExperiment load_experiment_file(const std::string& path);

}  // namespace zocoop

#endif  // ZOCOOP_CONFIG_HPP
