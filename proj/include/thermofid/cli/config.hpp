#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "thermofid/scan.hpp"
#include "thermofid/thermo_model.hpp"

namespace thermofid::cli {

/// Bad configuration. what() reads "config:<line>: <key>: <message>".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, int line, const std::string& message);
  const std::string& key() const { return key_; }
  int line() const { return line_; }

 private:
  std::string key_;
  int line_;
};

/// Either an explicit list or min..max by step.
struct AxisSpec {
  std::vector<double> values;
  std::optional<double> min, max, step;

  std::vector<double> expand() const;
  nlohmann::json to_json() const;
};

struct ModelSpec {
  std::string name;
  /// Every parameter of the model, defaults filled in.
  nlohmann::json params = nlohmann::json::object();
};

struct DetectionSpec {
  std::vector<scan::FieldKind> minima;
  std::vector<scan::FieldKind> jumps;
  scan::JumpOptions jump;
};

struct ClassifySpec {
  std::vector<double> lambdas;
  std::vector<int> sizes;
  AxisSpec t;
  double growth_factor = 3.0;
  double jump_growth = 1.5;
  double crossover_tolerance = 0.1;
};

struct RunConfig {
  ModelSpec model;
  AxisSpec lambda;
  AxisSpec t;
  double delta_t = 0.0;
  std::optional<double> delta_lambda;
  std::vector<scan::FieldKind> fields;
  DetectionSpec detection;
  std::optional<ClassifySpec> classify;
  std::string output_dir = "thermofid_out";
  std::string output_prefix;
  double failure_budget = 0.01;

  scan::ScanGrid grid() const;
};

/// Parses and validates. Throws ConfigError with the line of the offending key.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

nlohmann::json to_json(const RunConfig& c);

/// Models by name: two_level, schottky, ising2d, dicke, tim1d, lmg, chain.
/// size > 0 replaces the model's size parameter.
std::shared_ptr<const ThermoModel> make_model(const ModelSpec& m, int size = 0);

/// True for models whose formula is already the thermodynamic limit.
bool is_size_free(const ModelSpec& m);

}  // namespace thermofid::cli
