#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "stokrig/simulators.hpp"

namespace stokrig {

enum class CaseKind { MM1Known, MM1Budget, EggBox, Ishigami };

enum class SurrogateKind { OrdinarySk, FullPceSk, LarPceSk };

std::string to_string(CaseKind kind);
std::string to_string(SurrogateKind kind);
CaseKind case_from_string(const std::string& name);
SurrogateKind surrogate_from_string(const std::string& name);

/// One benchmark configuration: testbed, design size, simulation budget,
/// trend-basis settings, and experiment bookkeeping.
struct ScenarioSpec {
  std::string id = "custom";
  CaseKind kind = CaseKind::MM1Known;
  int k = 10;
  double run_length = 6000.0;  // T (M/M/1 cases)
  long budget = 0;             // C replications (budget cases)
  int full_degree = 0;         // 0: full-PCE surrogate not applicable
  int lar_degree = 5;
  double q_norm = 1.0;
  int macro_replications = 20;
  std::uint64_t seed = 20230600;
  std::vector<SurrogateKind> surrogates;
  int validation_points = 1000;
  NoiseReading noise_reading = NoiseReading::Variance;
  bool use_des = false;  // M/M/1: event-driven simulation instead of Gaussian synthesis
  int jobs = 1;

  int dimension() const;
  Eigen::VectorXd domain_lo() const;
  Eigen::VectorXd domain_hi() const;
  bool is_budget_case() const;

  void validate() const;
};

/// The twelve built-in scenario presets (three per testbed protocol).
const std::vector<ScenarioSpec>& builtin_scenarios();

/// Look up a preset by id; throws ConfigError for unknown ids.
ScenarioSpec scenario_by_id(const std::string& id);

/// Parses a JSON configuration string: either {"scenario": "<preset-id>", ...
/// overrides} or a fully custom {"case": ..., "k": ..., ...} description.
/// Throws ConfigError on malformed input.
ScenarioSpec scenario_from_json(const std::string& json_text);

/// Serializes the resolved spec (for the metadata sidecar and config echo).
std::string scenario_to_json(const ScenarioSpec& spec);

}  // namespace stokrig
