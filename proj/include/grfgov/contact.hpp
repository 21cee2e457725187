#pragma once

// Compliant point-foot ground contact and a mass-on-leg plant built on it.
// Used to cross-check the reduced model's GRF estimate and to measure foot
// slip when replaying closed-loop commands.
//
// The leg is a massless force actuator between the mass and a light foot. It
// pushes with the length-constraint multiplier evaluated for the current
// mass/foot geometry, so the foot sees the force the reduced model predicts
// while the ground reacts through its own spring, damper and friction.

#include "grfgov/rom_dynamics.hpp"

namespace grfgov {

struct GroundParams {
  double k_pg = 2e4;    // [N/m]
  double k_dg = 200.0;  // [N s/m], active only while compressing
  double mu_s = 0.45;
  double mu_c = 0.405;
  double mu_v = 0.1;     // [N s/m]
  double sigma = 0.01;   // Stribeck velocity [m/s]
  bool literal_friction = false;

  void validate() const;
};

/// Unilateral spring-damper; zero above the ground, no damping on rebound.
double normalForce(double p_z, double p_z_dot, const GroundParams& params);

/// Stribeck friction along one horizontal axis.
///   literal:   (-mu_c + (mu_s - mu_c) e^{-(v/sigma)^2}) u_gz |v| + mu_v v
///   corrected: -(mu_c + (mu_s - mu_c) e^{-(v/sigma)^2}) u_gz sign(v) - mu_v v
double frictionForce(double p_dot, double u_gz, const GroundParams& params);

struct CompliantPlantParams {
  double m = 5.0;
  double g = 9.81;
  double foot_mass = 0.01;        // [kg]
  double substep = 1e-5;          // [s]
  double stick_velocity = 1e-6;   // [m/s]
  GroundParams ground;
};

struct CompliantState {
  Vec3 c = Vec3::Zero();
  Vec3 c_dot = Vec3::Zero();
  Vec3 p = Vec3::Zero();  // foot point
  Vec3 p_dot = Vec3::Zero();
  double slip = 0.0;          // cumulative horizontal foot path length [m]
  double energy_scale = 0.0;  // reference for instability detection [J]
};

struct CompliantStepResult {
  CompliantState state;
  double normal_force = 0.0;  // at the end of the step [N]
  Vec3 leg_force = Vec3::Zero();  // on the foot, last substep [N]
  Vec3 friction = Vec3::Zero();
  double slip_increment = 0.0;
};

/// Foot resting on the ground under c, sunk to carry a static pendulum.
CompliantState makeCompliantState(const Vec3& c, const Vec3& c_dot, const Vec3& foot,
                                  const CompliantPlantParams& plant);

/// Kinetic plus ground elastic energy (gravity excluded).
double compliantEnergy(const CompliantState& s, const CompliantPlantParams& plant);

/// Advances the plant by dt with the command held. The thruster force acts on
/// the mass; the leg force follows from the command through the multiplier.
/// Throws SimulationError when the energy exceeds 10x its reference scale.
CompliantStepResult compliantPlantStep(const CompliantState& state,
                                       const ThrusterCommand& cmd,
                                       const CompliantPlantParams& plant, double dt);

}  // namespace grfgov
