#pragma once

#include <string>

#include "grfgov/constraints.hpp"
#include "grfgov/contact.hpp"
#include "grfgov/erg.hpp"

namespace grfgov {

enum class ScenarioKind { kVlip, kWalk };

const char* scenarioName(ScenarioKind kind);
ScenarioKind scenarioFromName(const std::string& name);

struct WalkSchedule {
  double speed = 0.3;         // [m/s]
  double gait_period = 0.75;  // [s]
  double lat_amp = 0.025;     // [m]
  double lat_period = 1.5;    // [s]
  double height = 0.6;        // [m]
  double foot_offset = 0.05;  // [m]
};

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::kVlip;
  double mass = 5.0;
  double gravity = 9.81;
  TrackingGains gains;
  ErgRates rates;
  bool erg_enabled = true;
  ConstraintParams constraints;
  GroundParams ground;
  RomOptions rom;
  double dt = 1e-3;
  double duration = 2.0;
  WalkSchedule walk;

  Chart chart() const { return constraints.chart; }
  int steps() const;

  static ScenarioConfig defaults(ScenarioKind kind);
  void validate() const;
};

/// Applies a JSON config document on top of `base`. Unknown keys and a
/// scenario that disagrees with `base.kind` throw ConfigError.
ScenarioConfig applyConfigJson(const ScenarioConfig& base, const std::string& json_text);

/// Reads a config file; the scenario comes from the file unless `kind` is
/// given, in which case both must agree.
ScenarioConfig loadConfigFile(const std::string& path, const ScenarioKind* kind = nullptr);

}  // namespace grfgov
