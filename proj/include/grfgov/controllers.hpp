#pragma once

// Thruster and leg-length tracking law. The thruster acts tangentially to the
// leg when the radial projection is enabled so that it does not load the
// ground contact; the leg length channel tracks the radial error.

#include "grfgov/rom_dynamics.hpp"

namespace grfgov {

struct TrackingGains {
  double kp_t = 660.0;  // proportional thruster gain [N/m], scalar * I
  double kd_t = 60.0;   // derivative thruster gain [N s/m], scalar * I
  double kp_r = 660.0;  // proportional length gain [1/s^2]
  double kd_r = 60.0;   // derivative length gain [1/s]
  bool use_radial_projection = true;
  bool use_length_actuation = true;

  /// Throws std::invalid_argument on negative gains or when no channel is
  /// active.
  void validate() const;
};

struct CartesianReference {
  Vec3 c_t = Vec3::Zero();
  Vec3 c_t_dot = Vec3::Zero();
};

/// Unit-radial projector j j^T with j = (c - u) / |c - u|.
Mat3 radialProjection(const PendulumState& state);

ThrusterCommand thrusterFeedback(const PendulumState& state,
                                 const CartesianReference& ref,
                                 const TrackingGains& gains);

}  // namespace grfgov
