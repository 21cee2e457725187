#include "grfgov/rom_dynamics.hpp"

#include <cmath>
#include <sstream>

namespace grfgov {

Vec3 pendulumJacobian(const PendulumState& state) {
  const Vec3 J = state.c - state.u;
  if (J.norm() < kDegeneratePivotTol) {
    std::ostringstream os;
    os << "degenerate pivot: |c - u| = " << J.norm() << " m";
    throw DegeneratePivotError(os.str());
  }
  return J;
}

double solveLambda(const PendulumState& state, const ThrusterCommand& cmd,
                   const RomOptions& opts) {
  const Vec3 J = pendulumJacobian(state);
  double rhs = -J.dot(state.gravity() + cmd.u_tc / state.m) + cmd.u_r +
               J.dot(state.u_ddot);
  if (opts.exact_length_constraint) {
    rhs -= state.c_dot.squaredNorm();
  }
  return state.m * rhs / J.squaredNorm();
}

Vec3 grf(const PendulumState& state, double lambda) {
  return pendulumJacobian(state) * lambda;
}

GrfEstimate estimateGrf(const PendulumState& state, const ThrusterCommand& cmd,
                        const RomOptions& opts) {
  GrfEstimate out;
  out.J_s = pendulumJacobian(state);
  out.lambda = solveLambda(state, cmd, opts);
  out.u_g = out.J_s * out.lambda;
  return out;
}

Vec3 romAccel(const PendulumState& state, const ThrusterCommand& cmd,
              const RomOptions& opts) {
  const double lambda = solveLambda(state, cmd, opts);
  return state.gravity() + cmd.u_tc / state.m +
         pendulumJacobian(state) * (lambda / state.m);
}

PendulumState stepRk4(const PendulumState& state, const ThrusterCommand& cmd,
                      double dt, const RomOptions& opts) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("stepRk4: dt must be positive");
  }
  auto deriv = [&](const Vec3& c, const Vec3& c_dot, Vec3& dc, Vec3& dc_dot) {
    PendulumState s = state;
    s.c = c;
    s.c_dot = c_dot;
    dc = c_dot;
    dc_dot = romAccel(s, cmd, opts);
  };

  Vec3 k1c, k1v, k2c, k2v, k3c, k3v, k4c, k4v;
  deriv(state.c, state.c_dot, k1c, k1v);
  deriv(state.c + 0.5 * dt * k1c, state.c_dot + 0.5 * dt * k1v, k2c, k2v);
  deriv(state.c + 0.5 * dt * k2c, state.c_dot + 0.5 * dt * k2v, k3c, k3v);
  deriv(state.c + dt * k3c, state.c_dot + dt * k3v, k4c, k4v);

  PendulumState next = state;
  next.c = state.c + dt / 6.0 * (k1c + 2.0 * k2c + 2.0 * k3c + k4c);
  next.c_dot = state.c_dot + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  return next;
}

double mechanicalEnergy(const PendulumState& state) {
  return 0.5 * state.m * state.c_dot.squaredNorm() + state.m * state.g * state.c.z();
}

VlipChartResult vlipFromCartesian(const Vec3& c, const Vec3& u, const Vec3& c_dot) {
  const Vec3 r = c - u;
  const double l = r.norm();
  if (l < kDegeneratePivotTol) {
    throw DegeneratePivotError("vlipFromCartesian: mass coincides with pivot");
  }
  const double rho = std::hypot(r.x(), r.y());
  VlipChartResult out;
  out.q.l = l;
  out.q.theta = std::atan2(rho, r.z());
  out.q.l_dot = r.dot(c_dot) / l;

  if (out.q.theta < 1e-9) {
    out.heading_undefined = true;
    out.q.phi = 0.0;
    out.q.phi_dot = 0.0;
    out.q.theta_dot = std::hypot(c_dot.x(), c_dot.y()) / l;
    return out;
  }
  out.q.phi = std::atan2(r.y(), r.x());
  const double rho_dot = (r.x() * c_dot.x() + r.y() * c_dot.y()) / rho;
  out.q.theta_dot = (r.z() * rho_dot - rho * c_dot.z()) / (l * l);
  out.q.phi_dot = (r.x() * c_dot.y() - r.y() * c_dot.x()) / (rho * rho);
  return out;
}

namespace {

Vec3 radialDir(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
          std::cos(theta)};
}

}  // namespace

Vec3 cartesianFromVlip(const VlipCoords& q, const Vec3& u) {
  return u + q.l * radialDir(q.theta, q.phi);
}

Vec3 cartesianVelocityFromVlip(const VlipCoords& q) {
  const double st = std::sin(q.theta), ct = std::cos(q.theta);
  const double sp = std::sin(q.phi), cp = std::cos(q.phi);
  const Vec3 d(st * cp, st * sp, ct);
  const Vec3 d_theta(ct * cp, ct * sp, -st);
  const Vec3 d_phi(-st * sp, st * cp, 0.0);
  return q.l_dot * d + q.l * q.theta_dot * d_theta + q.l * q.phi_dot * d_phi;
}

}  // namespace grfgov
