#include "grfgov/contact.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace grfgov {

void GroundParams::validate() const {
  if (!(k_pg > 0.0)) throw std::invalid_argument("ground: k_pg must be positive");
  if (!(k_dg >= 0.0)) throw std::invalid_argument("ground: k_dg must be non-negative");
  if (!(mu_s >= mu_c && mu_c >= 0.0)) {
    throw std::invalid_argument("ground: require mu_s >= mu_c >= 0");
  }
  if (!(sigma > 0.0)) throw std::invalid_argument("ground: sigma must be positive");
}

double normalForce(double p_z, double p_z_dot, const GroundParams& params) {
  if (p_z > 0.0) return 0.0;
  const double damping = p_z_dot > 0.0 ? 0.0 : params.k_dg;
  return std::max(0.0, -params.k_pg * p_z - damping * p_z_dot);
}

double frictionForce(double p_dot, double u_gz, const GroundParams& params) {
  const double v = p_dot / params.sigma;
  const double stribeck = (params.mu_s - params.mu_c) * std::exp(-v * v);
  if (params.literal_friction) {
    return (-params.mu_c + stribeck) * u_gz * std::abs(p_dot) + params.mu_v * p_dot;
  }
  const double sgn = (p_dot > 0.0) - (p_dot < 0.0);
  return -(params.mu_c + stribeck) * u_gz * sgn - params.mu_v * p_dot;
}

CompliantState makeCompliantState(const Vec3& c, const Vec3& c_dot, const Vec3& foot,
                                  const CompliantPlantParams& plant) {
  CompliantState s;
  s.c = c;
  s.c_dot = c_dot;
  const Vec3 r0 = c - Vec3(foot.x(), foot.y(), 0.0);
  const double cos_tilt = r0.z() / r0.norm();
  // Ground sink under the radial load of a static pendulum.
  const double normal = plant.m * plant.g * cos_tilt * cos_tilt + plant.foot_mass * plant.g;
  s.p = Vec3(foot.x(), foot.y(), -normal / plant.ground.k_pg);
  s.energy_scale =
      std::max(compliantEnergy(s, plant), plant.m * plant.g * (c - s.p).norm());
  return s;
}

double compliantEnergy(const CompliantState& s, const CompliantPlantParams& plant) {
  const double sink = std::min(s.p.z(), 0.0);
  return 0.5 * plant.m * s.c_dot.squaredNorm() +
         0.5 * plant.foot_mass * s.p_dot.squaredNorm() +
         0.5 * plant.ground.k_pg * sink * sink;
}

CompliantStepResult compliantPlantStep(const CompliantState& state,
                                       const ThrusterCommand& cmd,
                                       const CompliantPlantParams& plant, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("compliantPlantStep: dt must be positive");
  const int n_sub = std::max(1, static_cast<int>(std::ceil(dt / plant.substep - 1e-9)));
  const double h = dt / n_sub;
  const Vec3 gravity(0.0, 0.0, -plant.g);
  const GroundParams& gp = plant.ground;

  CompliantStepResult out;
  CompliantState s = state;
  PendulumState leg;
  leg.m = plant.m;
  leg.g = plant.g;
  for (int i = 0; i < n_sub; ++i) {
    leg.c = s.c;
    leg.c_dot = s.c_dot;
    leg.u = s.p;
    if ((s.c - s.p).norm() < kDegeneratePivotTol) {
      throw DegeneratePivotError("compliant plant: foot coincides with mass");
    }
    const Vec3 push = grf(leg, solveLambda(leg, cmd));

    const Vec3 f_mass = push + plant.m * gravity + cmd.u_tc;
    Vec3 f_foot = -push + plant.foot_mass * gravity;
    const double normal = normalForce(s.p.z(), s.p_dot.z(), gp);
    f_foot.z() += normal;

    Vec3 friction = Vec3::Zero();
    Vec3 p_dot_next = s.p_dot;
    for (int ax = 0; ax < 2; ++ax) {
      const double v = s.p_dot(ax);
      const double applied = f_foot(ax);
      double f = 0.0;
      bool stuck = false;
      if (normal > 0.0) {
        if (std::abs(v) <= plant.stick_velocity) {
          if (gp.literal_friction) {
            f = frictionForce(v, normal, gp);
          } else if (std::abs(applied) <= gp.mu_s * normal) {
            f = -applied;
            stuck = true;
          } else {
            f = applied > 0.0 ? -gp.mu_s * normal : gp.mu_s * normal;
          }
        } else {
          f = frictionForce(v, normal, gp);
        }
      }
      friction(ax) = f;
      if (stuck) {
        p_dot_next(ax) = 0.0;
      } else {
        const double v_new = v + h * (applied + f) / plant.foot_mass;
        // A sign change under friction ends the slide.
        const bool reversed = normal > 0.0 && !gp.literal_friction &&
                              std::abs(v) > plant.stick_velocity && v * v_new < 0.0;
        p_dot_next(ax) = reversed ? 0.0 : v_new;
      }
    }
    p_dot_next.z() = s.p_dot.z() + h * f_foot.z() / plant.foot_mass;

    const Vec3 c_dot_next = s.c_dot + h * f_mass / plant.m;
    const Vec3 p_prev = s.p;
    s.c_dot = c_dot_next;
    s.c += h * s.c_dot;
    s.p_dot = p_dot_next;
    s.p += h * s.p_dot;

    const double dslip = std::hypot(s.p.x() - p_prev.x(), s.p.y() - p_prev.y());
    s.slip += dslip;
    out.slip_increment += dslip;
    out.friction = Vec3(friction.x(), friction.y(), 0.0);
    out.normal_force = normal;
    out.leg_force = -push;
  }

  const double energy = compliantEnergy(s, plant);
  if (!std::isfinite(energy) || energy > 10.0 * s.energy_scale) {
    std::ostringstream os;
    os << "compliant plant unstable: energy " << energy << " J exceeds 10x scale "
       << s.energy_scale << " J; reduce dt or the substep";
    throw SimulationError(os.str());
  }
  out.state = s;
  return out;
}

}  // namespace grfgov
