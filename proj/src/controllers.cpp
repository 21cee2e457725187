#include "grfgov/controllers.hpp"

#include <stdexcept>

namespace grfgov {

void TrackingGains::validate() const {
  if (kp_t < 0.0 || kd_t < 0.0 || kp_r < 0.0 || kd_r < 0.0) {
    throw std::invalid_argument("tracking gains must be non-negative");
  }
  const bool thruster_on = kp_t > 0.0 || kd_t > 0.0;
  const bool length_on = use_length_actuation && (kp_r > 0.0 || kd_r > 0.0);
  if (!thruster_on && !length_on) {
    throw std::invalid_argument("tracking gains: no actuation channel enabled");
  }
}

Mat3 radialProjection(const PendulumState& state) {
  const Vec3 j = pendulumJacobian(state).normalized();
  return j * j.transpose();
}

ThrusterCommand thrusterFeedback(const PendulumState& state,
                                 const CartesianReference& ref,
                                 const TrackingGains& gains) {
  const Vec3 J = pendulumJacobian(state);
  const Vec3 e = ref.c_t - state.c;
  const Vec3 e_dot = ref.c_t_dot - state.c_dot;

  ThrusterCommand cmd;
  const Vec3 pd = gains.kp_t * e + gains.kd_t * e_dot;
  if (gains.use_radial_projection) {
    const Vec3 j = J.normalized();
    cmd.u_tc = pd - j * j.dot(pd);
  } else {
    cmd.u_tc = pd;
  }
  if (gains.use_length_actuation) {
    cmd.u_r = J.dot(gains.kp_r * e + gains.kd_r * e_dot);
  }
  return cmd;
}

}  // namespace grfgov
