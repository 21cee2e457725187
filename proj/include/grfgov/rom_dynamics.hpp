#pragma once

// Variable-length inverted pendulum: a point mass on a massless extensible
// leg pivoting about the center of pressure, with a thruster force applied
// at the mass. The leg length is driven through a kinematic constraint whose
// multiplier is the ground reaction force magnitude.

#include "grfgov/types.hpp"

namespace grfgov {

struct PendulumState {
  Vec3 c = Vec3::Zero();       // point-mass position [m]
  Vec3 c_dot = Vec3::Zero();   // point-mass velocity [m/s]
  Vec3 u = Vec3::Zero();       // center of pressure / pivot [m]
  Vec3 u_ddot = Vec3::Zero();  // pivot acceleration [m/s^2]
  double m = 5.0;              // [kg]
  double g = 9.81;             // [m/s^2], gravity is (0, 0, -g)

  Vec3 gravity() const { return Vec3(0.0, 0.0, -g); }
  double length() const { return (c - u).norm(); }
};

struct ThrusterCommand {
  Vec3 u_tc = Vec3::Zero();  // thruster force at the mass [N]
  double u_r = 0.0;          // leg-length acceleration input [m^2/s^2 through J_s]

  bool finite() const { return u_tc.allFinite() && std::isfinite(u_r); }
};

struct RomOptions {
  // Adds the |c_dot - u_dot|^2 term to the length constraint so that it is
  // the exact second derivative of |c - u|^2 / 2. Off reproduces the
  // first-order form used by the controller design.
  bool exact_length_constraint = false;
};

struct GrfEstimate {
  double lambda = 0.0;        // [N/m]
  Vec3 u_g = Vec3::Zero();    // [N]
  Vec3 J_s = Vec3::Zero();    // [m]
};

struct VlipCoords {
  double theta = 0.0;  // tilt from +z [rad]
  double phi = 0.0;    // heading from +x in the horizontal plane [rad]
  double l = 0.0;      // leg length [m]
  double theta_dot = 0.0;
  double phi_dot = 0.0;
  double l_dot = 0.0;
};

struct VlipChartResult {
  VlipCoords q;
  bool heading_undefined = false;  // set when theta < 1e-9, phi forced to 0
};

/// Constraint Jacobian row J_s = (c - u)^T. Throws DegeneratePivotError when
/// the pivot coincides with the mass.
Vec3 pendulumJacobian(const PendulumState& state);

/// Scalar multiplier of the length constraint.
double solveLambda(const PendulumState& state, const ThrusterCommand& cmd,
                   const RomOptions& opts = {});

/// Ground reaction force J_s^T * lambda.
Vec3 grf(const PendulumState& state, double lambda);

GrfEstimate estimateGrf(const PendulumState& state, const ThrusterCommand& cmd,
                        const RomOptions& opts = {});

/// Constrained acceleration of the point mass.
Vec3 romAccel(const PendulumState& state, const ThrusterCommand& cmd,
              const RomOptions& opts = {});

/// One classical RK4 step with the command and pivot held over the step.
PendulumState stepRk4(const PendulumState& state, const ThrusterCommand& cmd,
                      double dt, const RomOptions& opts = {});

/// Kinetic plus gravitational potential energy.
double mechanicalEnergy(const PendulumState& state);

VlipChartResult vlipFromCartesian(const Vec3& c, const Vec3& u,
                                  const Vec3& c_dot = Vec3::Zero());
Vec3 cartesianFromVlip(const VlipCoords& q, const Vec3& u);
Vec3 cartesianVelocityFromVlip(const VlipCoords& q);

}  // namespace grfgov
