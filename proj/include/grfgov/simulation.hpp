#pragma once

#include <functional>
#include <string>
#include <vector>

#include "grfgov/scenario.hpp"

namespace grfgov {

struct TelemetryRecord {
  double t = 0.0;
  Vec3 c = Vec3::Zero();
  Vec3 c_dot = Vec3::Zero();
  double theta = 0.0, phi = 0.0, l = 0.0;
  VecX x_r;
  VecX x_w;
  Vec3 u_tc = Vec3::Zero();
  double u_r = 0.0;
  double lambda = 0.0;
  Vec3 u_g = Vec3::Zero();
  VecX h_r;
  VecX h_w;
  double V = 0.0;
  double V_dot = 0.0;
  Branch branch = Branch::kIdle;
};

/// Target of the pendulum study: tilt, heading and length oscillations with
/// zero reference rates.
ReferenceVector vlipReference(double t);

/// Walking target: constant forward speed, lateral sway, constant height.
ReferenceVector walkReference(double t, const WalkSchedule& walk);

/// Footholds are piecewise constant over each gait period, centered under
/// the mean forward reference of the period, alternating laterally.
Vec3 copSchedule(double t, const WalkSchedule& walk);

ReferenceVector targetReference(const ScenarioConfig& cfg, double t);
Vec3 pivotAt(const ScenarioConfig& cfg, double t);

// Per-step view handed to an observer; all governor quantities refer to the
// instant before the update.
struct StepContext {
  int step = 0;
  double t = 0.0;
  const PendulumState* state = nullptr;
  const ConstraintLinearization* lin = nullptr;
  const VecX* x_r = nullptr;
  const VecX* x_w = nullptr;
  const VecX* h_r = nullptr;
  const ErgStepInfo* info = nullptr;  // null when the governor is bypassed
  const ErgDiagnostics* diag = nullptr;
};

using StepObserver = std::function<void(const StepContext&)>;

/// Runs one scenario. The record at step k holds the governor state before
/// its update, and the command, multiplier and GRF applied over [t_k, t_k+dt).
std::vector<TelemetryRecord> runSimulation(const ScenarioConfig& cfg,
                                           const StepObserver& observer = {});

struct SlipReport {
  double slip = 0.0;              // cumulative horizontal foot path [m]
  double max_normal_force = 0.0;  // [N]
  double final_normal_force = 0.0;
  std::vector<double> normal_force;  // per replayed record
  std::vector<double> slip_history;  // cumulative slip after each record
  bool diverged = false;  // the plant tripped its energy guard; replay stopped
  double diverged_at = 0.0;
  std::string message;
};

/// Drives the compliant-ground plant with the logged applied reference
/// through the same tracking law, starting from the logged initial state.
/// The thruster targets use the logged pivot; the pendulum geometry uses the
/// plant's own foot.
SlipReport replayOnCompliantGround(const ScenarioConfig& cfg,
                                   const std::vector<TelemetryRecord>& records,
                                   const CompliantPlantParams* plant = nullptr);

CompliantPlantParams compliantPlantFor(const ScenarioConfig& cfg);

}  // namespace grfgov
