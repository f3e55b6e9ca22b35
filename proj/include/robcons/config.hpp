#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "robcons/graphs.hpp"
#include "robcons/numerics.hpp"
#include "robcons/simulator.hpp"
#include "robcons/synthesis.hpp"

namespace robcons {

/// One simulation run of a case: the fixed perturbation applied to every
/// agent for the whole run.
struct CaseRun {
  std::string label;
  Matrix dA;
  Matrix dB;
};

struct CaseSpec {
  int id = 0;
  std::string description;
  std::vector<Vector> initial_states;
  std::vector<Event> events;
  std::vector<CaseRun> runs;
};

struct Config {
  Matrix A;
  Matrix B;
  Matrix C;
  PerturbationBox box;
  TopologyBank bank;

  double gamma_rel = 1.0;
  NumericSettings settings;

  double dt = 0.01;
  double t_end = 800.0;
  double switch_period = 1.0;
  std::vector<CaseSpec> cases;

  std::string output_directory = "out";
  std::vector<std::string> output_formats = {"csv", "json"};

  const CaseSpec& find_case(int id) const;
};

/// Parses and validates a configuration document. Missing optional blocks
/// take their defaults.
///
/// @throws Error(kConfig) with the JSON pointer of the offending value.
Config parse_config(const nlohmann::json& doc);

/// @throws Error(kConfig) if the file cannot be read or parsed.
Config load_config(const std::filesystem::path& path);

nlohmann::json to_json(const Config& config);

nlohmann::json matrix_to_json(const Matrix& M);

nlohmann::json controller_to_json(const Controller& K);

/// @throws Error(kConfig) on malformed controller documents.
Controller controller_from_json(const nlohmann::json& doc);

}  // namespace robcons
