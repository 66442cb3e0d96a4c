#include "stokrig/scenario.hpp"

#include <cmath>

#include <json.hpp>

namespace stokrig {

namespace {

constexpr double kPi = 3.14159265358979323846;

using json = nlohmann::ordered_json;

}  // namespace

std::string to_string(CaseKind kind) {
  switch (kind) {
    case CaseKind::MM1Known: return "mm1-known";
    case CaseKind::MM1Budget: return "mm1-budget";
    case CaseKind::EggBox: return "eggbox";
    case CaseKind::Ishigami: return "ishigami";
  }
  return "unknown";
}

std::string to_string(SurrogateKind kind) {
  switch (kind) {
    case SurrogateKind::OrdinarySk: return "sk";
    case SurrogateKind::FullPceSk: return "full-pce-sk";
    case SurrogateKind::LarPceSk: return "lar-pce-sk";
  }
  return "unknown";
}

CaseKind case_from_string(const std::string& name) {
  if (name == "mm1-known") return CaseKind::MM1Known;
  if (name == "mm1-budget") return CaseKind::MM1Budget;
  if (name == "eggbox") return CaseKind::EggBox;
  if (name == "ishigami") return CaseKind::Ishigami;
  throw ConfigError("unknown case: " + name);
}

SurrogateKind surrogate_from_string(const std::string& name) {
  if (name == "sk") return SurrogateKind::OrdinarySk;
  if (name == "full-pce-sk") return SurrogateKind::FullPceSk;
  if (name == "lar-pce-sk") return SurrogateKind::LarPceSk;
  throw ConfigError("unknown surrogate: " + name);
}

int ScenarioSpec::dimension() const {
  switch (kind) {
    case CaseKind::MM1Known:
    case CaseKind::MM1Budget: return 1;
    case CaseKind::EggBox: return 2;
    case CaseKind::Ishigami: return 3;
  }
  return 0;
}

Eigen::VectorXd ScenarioSpec::domain_lo() const {
  switch (kind) {
    case CaseKind::MM1Known:
    case CaseKind::MM1Budget: return Eigen::VectorXd::Constant(1, 0.3);
    case CaseKind::EggBox: return Eigen::VectorXd::Constant(2, -1.0);
    case CaseKind::Ishigami: return Eigen::VectorXd::Constant(3, -kPi);
  }
  return {};
}

Eigen::VectorXd ScenarioSpec::domain_hi() const {
  switch (kind) {
    case CaseKind::MM1Known:
    case CaseKind::MM1Budget: return Eigen::VectorXd::Constant(1, 0.9);
    case CaseKind::EggBox: return Eigen::VectorXd::Constant(2, 1.0);
    case CaseKind::Ishigami: return Eigen::VectorXd::Constant(3, kPi);
  }
  return {};
}

bool ScenarioSpec::is_budget_case() const { return kind != CaseKind::MM1Known; }

void ScenarioSpec::validate() const {
  if (k < 2) throw ConfigError("scenario: k must be >= 2");
  if (kind == CaseKind::MM1Known || kind == CaseKind::MM1Budget) {
    if (!(run_length > 0.0)) throw ConfigError("scenario: run length must be positive");
  }
  if (is_budget_case()) {
    if (budget < k) throw ConfigError("scenario: budget must be at least one replication per point");
  }
  if (lar_degree < 0 || full_degree < 0) throw ConfigError("scenario: negative degree");
  if (!(q_norm > 0.0) || q_norm > 1.0) throw ConfigError("scenario: q must lie in (0, 1]");
  if (macro_replications < 1) throw ConfigError("scenario: need at least one macro-replication");
  if (validation_points < 2) throw ConfigError("scenario: validation set too small");
  if (surrogates.empty()) throw ConfigError("scenario: no surrogates requested");
  for (SurrogateKind s : surrogates) {
    if (s == SurrogateKind::FullPceSk && full_degree <= 0) {
      throw ConfigError("scenario: full-pce-sk requested without a full degree");
    }
  }
  if (jobs < 1) throw ConfigError("scenario: jobs must be >= 1");
}

const std::vector<ScenarioSpec>& builtin_scenarios() {
  static const std::vector<ScenarioSpec> presets = [] {
    std::vector<ScenarioSpec> v;
    auto mm1 = [](std::string id, CaseKind kind, int k, double t, int degree, long c) {
      ScenarioSpec s;
      s.id = std::move(id);
      s.kind = kind;
      s.k = k;
      s.run_length = t;
      s.budget = c;
      s.lar_degree = degree;
      s.q_norm = 1.0;
      s.surrogates = {SurrogateKind::OrdinarySk, SurrogateKind::LarPceSk};
      s.validation_points = 1000;
      return s;
    };
    v.push_back(mm1("mm1-known-1", CaseKind::MM1Known, 10, 6000.0, 5, 0));
    v.push_back(mm1("mm1-known-2", CaseKind::MM1Known, 30, 2000.0, 10, 0));
    v.push_back(mm1("mm1-known-3", CaseKind::MM1Known, 50, 1200.0, 16, 0));
    v.push_back(mm1("mm1-budget-1", CaseKind::MM1Budget, 10, 6000.0, 5, 500));
    v.push_back(mm1("mm1-budget-2", CaseKind::MM1Budget, 30, 2000.0, 10, 500));
    v.push_back(mm1("mm1-budget-3", CaseKind::MM1Budget, 50, 1200.0, 16, 500));

    auto multi = [](std::string id, CaseKind kind, int k, long c, int full, int lar) {
      ScenarioSpec s;
      s.id = std::move(id);
      s.kind = kind;
      s.k = k;
      s.budget = c;
      s.full_degree = full;
      s.lar_degree = lar;
      s.q_norm = 0.8;
      s.surrogates = {SurrogateKind::OrdinarySk, SurrogateKind::FullPceSk,
                      SurrogateKind::LarPceSk};
      s.validation_points = 2048;
      return s;
    };
    v.push_back(multi("eggbox-1", CaseKind::EggBox, 32, 1280, 5, 9));
    v.push_back(multi("eggbox-2", CaseKind::EggBox, 64, 1280, 8, 11));
    v.push_back(multi("eggbox-3", CaseKind::EggBox, 128, 1280, 10, 12));
    v.push_back(multi("ishigami-1", CaseKind::Ishigami, 64, 2560, 4, 6));
    v.push_back(multi("ishigami-2", CaseKind::Ishigami, 128, 2560, 6, 8));
    v.push_back(multi("ishigami-3", CaseKind::Ishigami, 256, 2560, 7, 9));
    return v;
  }();
  return presets;
}

ScenarioSpec scenario_by_id(const std::string& id) {
  for (const auto& s : builtin_scenarios()) {
    if (s.id == id) return s;
  }
  throw ConfigError("unknown scenario id: " + id);
}

namespace {

void apply_overrides(ScenarioSpec& spec, const json& j) {
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "scenario" || key == "case") {
        continue;  // handled by the caller
      } else if (key == "k") {
        spec.k = value.get<int>();
      } else if (key == "run_length") {
        spec.run_length = value.get<double>();
      } else if (key == "budget") {
        spec.budget = value.get<long>();
      } else if (key == "full_degree") {
        spec.full_degree = value.get<int>();
      } else if (key == "lar_degree") {
        spec.lar_degree = value.get<int>();
      } else if (key == "q_norm") {
        spec.q_norm = value.get<double>();
      } else if (key == "macro_replications") {
        spec.macro_replications = value.get<int>();
      } else if (key == "seed") {
        spec.seed = value.get<std::uint64_t>();
      } else if (key == "surrogates") {
        spec.surrogates.clear();
        for (const auto& s : value) spec.surrogates.push_back(surrogate_from_string(s.get<std::string>()));
      } else if (key == "validation_points") {
        spec.validation_points = value.get<int>();
      } else if (key == "noise_reading") {
        std::string r = value.get<std::string>();
        if (r == "variance") spec.noise_reading = NoiseReading::Variance;
        else if (r == "sd") spec.noise_reading = NoiseReading::StdDev;
        else throw ConfigError("noise_reading must be 'variance' or 'sd'");
      } else if (key == "use_des") {
        spec.use_des = value.get<bool>();
      } else if (key == "jobs") {
        spec.jobs = value.get<int>();
      } else {
        throw ConfigError("unknown config key: " + key);
      }
    } catch (const json::exception& e) {
      throw ConfigError("bad value for '" + key + "': " + e.what());
    }
  }
}

}  // namespace

ScenarioSpec scenario_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");

  ScenarioSpec spec;
  if (j.contains("scenario")) {
    spec = scenario_by_id(j["scenario"].get<std::string>());
  } else if (j.contains("case")) {
    spec.kind = case_from_string(j["case"].get<std::string>());
    spec.id = "custom-" + to_string(spec.kind);
    // sensible per-case defaults; overrides below
    switch (spec.kind) {
      case CaseKind::MM1Known:
        spec = scenario_by_id("mm1-known-1");
        break;
      case CaseKind::MM1Budget:
        spec = scenario_by_id("mm1-budget-1");
        break;
      case CaseKind::EggBox:
        spec = scenario_by_id("eggbox-2");
        break;
      case CaseKind::Ishigami:
        spec = scenario_by_id("ishigami-3");
        break;
    }
    spec.id = "custom-" + to_string(spec.kind);
  } else {
    throw ConfigError("config needs either 'scenario' (preset id) or 'case'");
  }
  apply_overrides(spec, j);
  spec.validate();
  return spec;
}

std::string scenario_to_json(const ScenarioSpec& spec) {
  json j;
  j["id"] = spec.id;
  j["case"] = to_string(spec.kind);
  j["k"] = spec.k;
  if (spec.kind == CaseKind::MM1Known || spec.kind == CaseKind::MM1Budget) {
    j["run_length"] = spec.run_length;
  }
  if (spec.is_budget_case()) j["budget"] = spec.budget;
  if (spec.full_degree > 0) j["full_degree"] = spec.full_degree;
  j["lar_degree"] = spec.lar_degree;
  j["q_norm"] = spec.q_norm;
  j["macro_replications"] = spec.macro_replications;
  j["seed"] = spec.seed;
  json surr = json::array();
  for (SurrogateKind s : spec.surrogates) surr.push_back(to_string(s));
  j["surrogates"] = surr;
  j["validation_points"] = spec.validation_points;
  j["noise_reading"] = spec.noise_reading == NoiseReading::Variance ? "variance" : "sd";
  j["use_des"] = spec.use_des;
  return j.dump(2);
}

}  // namespace stokrig
