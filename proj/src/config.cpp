#include "zocoop/config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "zocoop/errors.hpp"
#include "zocoop/wind_farm.hpp"

namespace zocoop {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& msg) {
  throw ConfigError(origin + ": " + msg);
}

const json& require(const json& obj, const char* key, const std::string& origin,
                    const std::string& ctx) {
  if (!obj.is_object()) fail(origin, ctx + " must be an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(origin, ctx + " needs field '" + key + "'");
  return *it;
}

double number_at(const json& obj, const char* key, const std::string& origin,
                 const std::string& ctx) {
  const json& v = require(obj, key, origin, ctx);
  if (!v.is_number()) fail(origin, ctx + "." + key + " must be a number");
  return v.get<double>();
}

double number_or(const json& obj, const char* key, double fallback,
                 const std::string& origin, const std::string& ctx) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) fail(origin, ctx + "." + key + " must be a number");
  return v.get<double>();
}

std::int64_t integer_at(const json& obj, const char* key,
                        const std::string& origin, const std::string& ctx) {
  const json& v = require(obj, key, origin, ctx);
  if (!v.is_number_integer() && !v.is_number_unsigned()) {
    fail(origin, ctx + "." + key + " must be an integer");
  }
  return v.get<std::int64_t>();
}

std::int64_t integer_or(const json& obj, const char* key, std::int64_t fallback,
                        const std::string& origin, const std::string& ctx) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer() && !v.is_number_unsigned()) {
    fail(origin, ctx + "." + key + " must be an integer");
  }
  return v.get<std::int64_t>();
}

std::string string_at(const json& obj, const char* key,
                      const std::string& origin, const std::string& ctx) {
  const json& v = require(obj, key, origin, ctx);
  if (!v.is_string()) fail(origin, ctx + "." + key + " must be a string");
  return v.get<std::string>();
}

std::string resolve(const std::string& base_dir, const std::string& path) {
  namespace fs = std::filesystem;
  fs::path p(path);
  if (p.is_absolute() || base_dir.empty()) return path;
  return (fs::path(base_dir) / p).string();
}

Eigen::MatrixXi load_delay_matrix_csv(const std::string& path,
                                      const std::string& origin) {
  std::ifstream in(path);
  if (!in) fail(origin, "cannot open delay matrix csv: " + path);
  std::vector<std::vector<int>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    std::vector<int> row;
    std::istringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) {
      try {
        row.push_back(std::stoi(field));
      } catch (const std::exception&) {
        fail(origin, "delay matrix entry is not an integer: " + field);
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail(origin, "delay matrix csv is empty: " + path);
  const std::size_t n = rows.size();
  Eigen::MatrixXi m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < n; ++r) {
    if (rows[r].size() != n) {
      fail(origin, "delay matrix csv must be square: " + path);
    }
    for (std::size_t c = 0; c < n; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          rows[r][c];
    }
  }
  return m;
}

Schedule parse_schedule(const json& node, const std::string& origin,
                        const std::string& ctx) {
  Schedule s;
  const std::string kind = string_at(node, "kind", origin, ctx);
  if (kind == "power_law") {
    s.kind = ScheduleKind::kPowerLaw;
    s.exponent = number_at(node, "exponent", origin, ctx);
  } else if (kind == "constant") {
    s.kind = ScheduleKind::kConstant;
    s.exponent = number_or(node, "exponent", 0.0, origin, ctx);
  } else {
    fail(origin, ctx + ".kind must be 'power_law' or 'constant'");
  }
  s.base = number_at(node, "base", origin, ctx);
  return s;
}

DelayModelSpec parse_delay(const json& node, const std::string& origin,
                           const std::string& base_dir) {
  DelayModelSpec spec;
  const std::string kind = string_at(node, "kind", origin, "delay");
  spec.bound = static_cast<int>(integer_or(node, "bound", 0, origin, "delay"));
  spec.seed_tag = static_cast<std::uint64_t>(
      integer_or(node, "seed", 0, origin, "delay"));
  if (kind == "zero") {
    spec.kind = DelayKind::kZero;
  } else if (kind == "uniform_random") {
    spec.kind = DelayKind::kUniformRandom;
    spec.bound =
        static_cast<int>(integer_at(node, "bound", origin, "delay"));
  } else if (kind == "periodic_gossip") {
    spec.kind = DelayKind::kPeriodicGossip;
    spec.bound = static_cast<int>(integer_at(node, "bound", origin, "delay"));
    spec.period = static_cast<int>(integer_at(node, "period", origin, "delay"));
  } else if (kind == "fixed_matrix") {
    spec.kind = DelayKind::kFixedMatrix;
    spec.bound = static_cast<int>(integer_at(node, "bound", origin, "delay"));
    if (node.contains("matrix")) {
      const json& m = node.at("matrix");
      if (!m.is_array() || m.empty()) {
        fail(origin, "delay.matrix must be a non-empty array of arrays");
      }
      const auto n = static_cast<Eigen::Index>(m.size());
      spec.matrix.resize(n, n);
      for (Eigen::Index r = 0; r < n; ++r) {
        const json& row = m.at(static_cast<std::size_t>(r));
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
          fail(origin, "delay.matrix must be square");
        }
        for (Eigen::Index c = 0; c < n; ++c) {
          const json& cell = row.at(static_cast<std::size_t>(c));
          if (!cell.is_number_integer() && !cell.is_number_unsigned()) {
            fail(origin, "delay.matrix entries must be integers");
          }
          spec.matrix(r, c) = cell.get<int>();
        }
      }
    } else if (node.contains("matrix_csv")) {
      spec.matrix = load_delay_matrix_csv(
          resolve(base_dir, string_at(node, "matrix_csv", origin, "delay")),
          origin);
    } else {
      fail(origin, "delay needs 'matrix' or 'matrix_csv' for fixed_matrix");
    }
  } else {
    fail(origin,
         "delay.kind must be one of zero, fixed_matrix, uniform_random, "
         "periodic_gossip");
  }
  return spec;
}

Partition parse_partition(const json& node, const std::string& origin) {
  if (node.contains("dims")) {
    const json& dims = node.at("dims");
    if (!dims.is_array() || dims.empty()) {
      fail(origin, "partition.dims must be a non-empty array");
    }
    std::vector<Eigen::Index> out;
    out.reserve(dims.size());
    for (const json& v : dims) {
      if (!v.is_number_integer() && !v.is_number_unsigned()) {
        fail(origin, "partition.dims entries must be integers");
      }
      out.push_back(v.get<Eigen::Index>());
    }
    return Partition(std::move(out));
  }
  const auto agents =
      static_cast<int>(integer_at(node, "agents", origin, "partition"));
  const auto block =
      static_cast<Eigen::Index>(integer_at(node, "block_dim", origin, "partition"));
  if (agents <= 0 || block <= 0) {
    fail(origin, "partition.agents and partition.block_dim must be positive");
  }
  return Partition::uniform(agents, block);
}

ProblemPtr parse_problem(const json& root, const std::string& origin,
                         const std::string& base_dir) {
  const json& node = require(root, "problem", origin, "config");
  const std::string name = string_at(node, "name", origin, "problem");

  if (name == "wind_farm") {
    WindFarmParams params;
    params.free_speed =
        number_or(node, "free_speed", params.free_speed, origin, "problem");
    params.rotor_diameter = number_or(node, "rotor_diameter",
                                      params.rotor_diameter, origin, "problem");
    params.wake_decay =
        number_or(node, "wake_decay", params.wake_decay, origin, "problem");
    params.spacing =
        number_or(node, "spacing", params.spacing, origin, "problem");
    if (node.contains("layout_csv")) {
      auto positions = load_turbine_layout(
          resolve(base_dir, string_at(node, "layout_csv", origin, "problem")));
      return make_wind_farm(std::move(positions), params);
    }
    const auto turbines =
        static_cast<int>(integer_at(node, "turbines", origin, "problem"));
    return make_wind_farm(turbines, params);
  }

  const Partition partition =
      parse_partition(require(root, "partition", origin, "config"), origin);

  if (name == "separable_quadratic") {
    const double radius =
        number_or(node, "domain_radius", 10.0, origin, "problem");
    return make_separable_quadratic(partition, radius);
  }
  if (name == "linear_probe") {
    const json& a = require(node, "a", origin, "problem");
    if (!a.is_array() || a.empty()) {
      fail(origin, "problem.a must be a non-empty array");
    }
    Eigen::VectorXd vec(static_cast<Eigen::Index>(a.size()));
    for (Eigen::Index k = 0; k < vec.size(); ++k) {
      const json& v = a.at(static_cast<std::size_t>(k));
      if (!v.is_number()) fail(origin, "problem.a entries must be numbers");
      vec[k] = v.get<double>();
    }
    if (vec.size() != partition.total()) {
      fail(origin, "problem.a length must equal the partition total");
    }
    return make_linear_probe(partition, std::move(vec));
  }
  if (name == "nonconvex_cosine") {
    const double lambda = number_or(node, "lambda", 0.1, origin, "problem");
    const double omega = number_or(node, "omega", 3.0, origin, "problem");
    return make_nonconvex_cosine(partition, lambda, omega);
  }
  fail(origin, "unknown problem name: " + name);
}

InitSpec parse_init(const json& root, const std::string& origin) {
  InitSpec init;
  if (!root.contains("init")) return init;
  const json& node = root.at("init");
  const std::string kind = string_at(node, "kind", origin, "init");
  if (kind == "constant") {
    init.kind = InitSpec::Kind::kConstant;
    init.fill = number_at(node, "value", origin, "init");
  } else if (kind == "vector") {
    init.kind = InitSpec::Kind::kExplicit;
    const json& values = require(node, "values", origin, "init");
    if (!values.is_array() || values.empty()) {
      fail(origin, "init.values must be a non-empty array");
    }
    init.vector.resize(static_cast<Eigen::Index>(values.size()));
    for (Eigen::Index k = 0; k < init.vector.size(); ++k) {
      const json& v = values.at(static_cast<std::size_t>(k));
      if (!v.is_number()) fail(origin, "init.values entries must be numbers");
      init.vector[k] = v.get<double>();
    }
  } else if (kind == "random_ball") {
    init.kind = InitSpec::Kind::kRandomBall;
    init.radius = number_at(node, "radius", origin, "init");
    if (!(init.radius > 0.0)) fail(origin, "init.radius must be positive");
  } else {
    fail(origin, "init.kind must be constant, vector, or random_ball");
  }
  return init;
}

LoadedExperiment parse_with_base_dir(const std::string& text,
                                     const std::string& origin,
                                     const std::string& base_dir) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  if (!root.is_object()) fail(origin, "config must be a JSON object");

  LoadedExperiment out;
  try {
    out.config.problem = parse_problem(root, origin, base_dir);
    const Schedule step =
        parse_schedule(require(root, "step", origin, "config"), origin, "step");
    const Schedule smoothing = parse_schedule(
        require(root, "smoothing", origin, "config"), origin, "smoothing");
    out.config.schedules = validate_schedule_pair(step, smoothing);
    out.config.delay =
        parse_delay(require(root, "delay", origin, "config"), origin, base_dir);
    out.config.horizon = integer_at(root, "horizon", origin, "config");
    out.config.trials =
        static_cast<int>(integer_or(root, "trials", 1, origin, "config"));
    const std::int64_t seed = integer_or(root, "seed", 0, origin, "config");
    out.config.master_seed = static_cast<std::uint64_t>(seed);
    out.config.init = parse_init(root, origin);
    out.config.smoothing_floor =
        number_or(root, "smoothing_floor", 1e-8, origin, "config");
    if (root.contains("trace")) {
      const json& v = root.at("trace");
      if (!v.is_boolean()) fail(origin, "trace must be a boolean");
      out.config.record_trace = v.get<bool>();
    }
    if (root.contains("output")) {
      out.output_dir = string_at(root, "output", origin, "config");
    }

    if (root.contains("sweep")) {
      const json& sweep = root.at("sweep");
      if (!sweep.is_object()) fail(origin, "sweep must be an object");
      if (sweep.contains("step")) {
        for (const json& v : sweep.at("step")) {
          out.step_variants.push_back(parse_schedule(v, origin, "sweep.step"));
        }
      }
      if (sweep.contains("smoothing")) {
        for (const json& v : sweep.at("smoothing")) {
          out.smoothing_variants.push_back(
              parse_schedule(v, origin, "sweep.smoothing"));
        }
      }
      if (sweep.contains("delay")) {
        for (const json& v : sweep.at("delay")) {
          out.delay_variants.push_back(parse_delay(v, origin, base_dir));
        }
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(origin + ": " + e.what());
  }

  validate_config(out.config);
  return out;
}

}  // namespace

LoadedExperiment parse_experiment_json(const std::string& text,
                                       const std::string& origin) {
  return parse_with_base_dir(text, origin, "");
}

LoadedExperiment load_experiment_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string base_dir =
      std::filesystem::path(path).parent_path().string();
  return parse_with_base_dir(buf.str(), path, base_dir);
}

}  // namespace zocoop
