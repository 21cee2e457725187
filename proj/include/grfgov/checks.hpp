#pragma once
// Property suites behind `grfgov check`. Each suite is deterministic (fixed
// seeds) and compares against an independent oracle.

#include <string>
#include <vector>

#include "grfgov/simulation.hpp"

namespace grfgov {

struct CheckItem {
  std::string label;
  bool passed = false;
  std::string detail;
};

struct CheckReport {
  std::string suite;
  std::vector<CheckItem> items;
  bool passed() const;
};

// Analytic frozen-sign J_r against central differences.
struct JacobianStats {
  int tested = 0;
  int excluded = 0;  // too close to a friction sign switch
  int failed = 0;
  double worst_rel = 0.0;
};
JacobianStats compareJacobians(Chart chart, EvalPoint point, int samples,
                               unsigned long long seed, double rel_tol = 1e-6);

// Governor descent along a full run.
struct LyapunovStats {
  int admissible_steps = 0;
  int vdot_violations = 0;
  double max_admissible_vdot = -1e300;
  int fd_failures = 0;
  double worst_fd_rel = 0.0;
  int tangential_steps = 0;
  int nullspace_failures = 0;
  double worst_nullspace = 0.0;
};
LyapunovStats lyapunovAlongRun(const ScenarioConfig& cfg);

// 4x4 saddle-point solve of the constrained dynamics; returns [c_ddot; lambda].
Eigen::Vector4d kktSolve(const PendulumState& state, const ThrusterCommand& cmd,
                         const RomOptions& opts = {});

struct ContactComparison {
  double compliant_normal = 0.0;
  double rom_normal = 0.0;
  double rel_error = 0.0;
};
/// Holds the pendulum at a fixed tilt on the compliant plant with the
/// tracking law for `duration`, then compares the settled normal force with
/// the reduced-model estimate at the same state and command.
ContactComparison steadyContact(double tilt, double length, double duration = 1.5);

CheckReport runJacobianSuite();
CheckReport runLyapunovSuite();
CheckReport runOracleSuite();
/// Throws std::invalid_argument for an unknown suite name.
CheckReport runCheckSuite(const std::string& name);

}  // namespace grfgov
