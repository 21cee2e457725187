#include "grfgov/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace grfgov {

using nlohmann::json;

const char* scenarioName(ScenarioKind kind) {
  return kind == ScenarioKind::kVlip ? "vlip" : "walk";
}

ScenarioKind scenarioFromName(const std::string& name) {
  if (name == "vlip") return ScenarioKind::kVlip;
  if (name == "walk") return ScenarioKind::kWalk;
  throw ConfigError("unknown scenario '" + name + "' (expected vlip or walk)");
}

int ScenarioConfig::steps() const {
  return static_cast<int>(std::llround(duration / dt));
}

ScenarioConfig ScenarioConfig::defaults(ScenarioKind kind) {
  ScenarioConfig cfg;
  cfg.kind = kind;
  if (kind == ScenarioKind::kVlip) {
    cfg.gains = {660.0, 60.0, 660.0, 60.0, true, true};
    cfg.rates = {1.0, 5.0, 2.0};
    cfg.constraints.mu_s = 0.45;
    cfg.constraints.include_angle = true;
    cfg.constraints.chart = Chart::kVlip;
    cfg.constraints.eval_point = EvalPoint::kReferencePose;
    cfg.ground.mu_s = 0.45;
    cfg.ground.mu_c = 0.405;
    cfg.duration = 2.0;
  } else {
    // Thrust tracks along the leg as well; the length channel stays on to
    // hold the height on the reduced model.
    cfg.gains = {400.0, 40.0, 400.0, 40.0, false, true};
    cfg.rates = {10.0, 15.0, 20.0};
    cfg.constraints.mu_s = 0.25;
    cfg.constraints.include_angle = false;
    cfg.constraints.chart = Chart::kCartesian;
    cfg.constraints.eval_point = EvalPoint::kState;
    cfg.ground.mu_s = 0.25;
    cfg.ground.mu_c = 0.225;
    cfg.duration = 3.0;
  }
  return cfg;
}

void ScenarioConfig::validate() const {
  if (!(dt > 0.0)) throw ConfigError("sim.dt_s must be positive");
  if (!(duration > 0.0)) throw ConfigError("sim.duration_s must be positive");
  if (!(mass > 0.0)) throw ConfigError("mass_kg must be positive");
  if (!(gravity > 0.0)) throw ConfigError("gravity must be positive");
  const Chart expected = kind == ScenarioKind::kVlip ? Chart::kVlip : Chart::kCartesian;
  if (constraints.chart != expected) {
    throw ConfigError("chart inconsistent with scenario kind");
  }
  if (kind == ScenarioKind::kWalk &&
      !(walk.gait_period > 0.0 && walk.lat_period > 0.0 && walk.height > 0.0)) {
    throw ConfigError("walk periods and height must be positive");
  }
  try {
    gains.validate();
    rates.validate();
    constraints.validate();
    ground.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

namespace {

void rejectUnknown(const json& obj, const std::string& where,
                   const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) {
      throw ConfigError("unknown config key '" + (where.empty() ? key : where + "." + key) +
                        "'");
    }
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config key '" + where + key + "' has the wrong type");
  }
}

}  // namespace

ScenarioConfig applyConfigJson(const ScenarioConfig& base, const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  rejectUnknown(doc, "",
                {"scenario", "mass_kg", "gravity", "gains", "erg", "constraints", "ground",
                 "sim", "walk"});

  ScenarioConfig cfg = base;
  if (doc.contains("scenario")) {
    const ScenarioKind kind = scenarioFromName(doc.at("scenario").get<std::string>());
    if (kind != base.kind) {
      throw ConfigError(std::string("config scenario '") + scenarioName(kind) +
                        "' disagrees with requested '" + scenarioName(base.kind) + "'");
    }
  }
  read(doc, "mass_kg", cfg.mass, "");
  read(doc, "gravity", cfg.gravity, "");

  if (doc.contains("gains")) {
    const json& j = doc.at("gains");
    rejectUnknown(j, "gains",
                  {"kp_t", "kd_t", "kp_r", "kd_r", "use_radial_projection",
                   "use_length_actuation"});
    read(j, "kp_t", cfg.gains.kp_t, "gains.");
    read(j, "kd_t", cfg.gains.kd_t, "gains.");
    read(j, "kp_r", cfg.gains.kp_r, "gains.");
    read(j, "kd_r", cfg.gains.kd_r, "gains.");
    read(j, "use_radial_projection", cfg.gains.use_radial_projection, "gains.");
    read(j, "use_length_actuation", cfg.gains.use_length_actuation, "gains.");
  }
  if (doc.contains("erg")) {
    const json& j = doc.at("erg");
    rejectUnknown(j, "erg", {"alpha_r", "alpha_t", "alpha_n", "enabled"});
    read(j, "alpha_r", cfg.rates.alpha_r, "erg.");
    read(j, "alpha_t", cfg.rates.alpha_t, "erg.");
    read(j, "alpha_n", cfg.rates.alpha_n, "erg.");
    read(j, "enabled", cfg.erg_enabled, "erg.");
  }
  if (doc.contains("constraints")) {
    const json& j = doc.at("constraints");
    rejectUnknown(j, "constraints",
                  {"mu_s", "f_min_n", "theta_min_rad", "include_angle", "evaluate_at"});
    read(j, "mu_s", cfg.constraints.mu_s, "constraints.");
    read(j, "f_min_n", cfg.constraints.f_min, "constraints.");
    read(j, "theta_min_rad", cfg.constraints.theta_min, "constraints.");
    read(j, "include_angle", cfg.constraints.include_angle, "constraints.");
    if (j.contains("evaluate_at")) {
      std::string where;
      read(j, "evaluate_at", where, "constraints.");
      if (where == "state") {
        cfg.constraints.eval_point = EvalPoint::kState;
      } else if (where == "reference") {
        cfg.constraints.eval_point = EvalPoint::kReferencePose;
      } else {
        throw ConfigError("constraints.evaluate_at must be 'state' or 'reference'");
      }
    }
  }
  if (doc.contains("ground")) {
    const json& j = doc.at("ground");
    rejectUnknown(j, "ground",
                  {"k_pg", "k_dg", "mu_s", "mu_c", "mu_v", "sigma", "literal_friction"});
    read(j, "k_pg", cfg.ground.k_pg, "ground.");
    read(j, "k_dg", cfg.ground.k_dg, "ground.");
    read(j, "mu_s", cfg.ground.mu_s, "ground.");
    read(j, "mu_c", cfg.ground.mu_c, "ground.");
    read(j, "mu_v", cfg.ground.mu_v, "ground.");
    read(j, "sigma", cfg.ground.sigma, "ground.");
    read(j, "literal_friction", cfg.ground.literal_friction, "ground.");
  }
  if (doc.contains("sim")) {
    const json& j = doc.at("sim");
    rejectUnknown(j, "sim", {"dt_s", "duration_s", "exact_length_constraint"});
    read(j, "dt_s", cfg.dt, "sim.");
    read(j, "duration_s", cfg.duration, "sim.");
    read(j, "exact_length_constraint", cfg.rom.exact_length_constraint, "sim.");
  }
  if (doc.contains("walk")) {
    const json& j = doc.at("walk");
    rejectUnknown(j, "walk",
                  {"speed_mps", "gait_period_s", "lat_amp_m", "lat_period_s", "height_m",
                   "foot_offset_m"});
    read(j, "speed_mps", cfg.walk.speed, "walk.");
    read(j, "gait_period_s", cfg.walk.gait_period, "walk.");
    read(j, "lat_amp_m", cfg.walk.lat_amp, "walk.");
    read(j, "lat_period_s", cfg.walk.lat_period, "walk.");
    read(j, "height_m", cfg.walk.height, "walk.");
    read(j, "foot_offset_m", cfg.walk.foot_offset, "walk.");
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig loadConfigFile(const std::string& path, const ScenarioKind* kind) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  ScenarioKind resolved;
  if (kind) {
    resolved = *kind;
  } else {
    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
    }
    if (!doc.is_object() || !doc.contains("scenario")) {
      throw ConfigError("config '" + path + "' does not name a scenario");
    }
    resolved = scenarioFromName(doc.at("scenario").get<std::string>());
  }
  try {
    return applyConfigJson(ScenarioConfig::defaults(resolved), text);
  } catch (const ConfigError& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
}

}  // namespace grfgov
