#include "grfgov/simulation.hpp"

#include <cmath>
#include <sstream>

namespace grfgov {

ReferenceVector vlipReference(double t) {
  const double s = std::sin(M_PI * t - M_PI);
  const double c = std::cos(M_PI * t - M_PI);
  VlipCoords q;
  q.theta = 0.45 + 0.45 * s;
  q.phi = -1.5 * s;
  q.l = 0.4 + 0.1 * c;
  return ReferenceVector::fromVlip(q);
}

ReferenceVector walkReference(double t, const WalkSchedule& walk) {
  const double w = 2.0 * M_PI / walk.lat_period;
  const Vec3 c_t(walk.speed * t, walk.lat_amp * std::sin(w * t), walk.height);
  const Vec3 c_t_dot(walk.speed, walk.lat_amp * w * std::cos(w * t), 0.0);
  return ReferenceVector::fromCartesian(c_t, c_t_dot);
}

Vec3 copSchedule(double t, const WalkSchedule& walk) {
  const double step_len = walk.speed * walk.gait_period;
  const long k = static_cast<long>(std::floor(t / walk.gait_period + 1e-9));
  const double side = (k % 2 == 0) ? 1.0 : -1.0;
  return {k * step_len + 0.5 * step_len, side * walk.foot_offset, 0.0};
}

ReferenceVector targetReference(const ScenarioConfig& cfg, double t) {
  return cfg.kind == ScenarioKind::kVlip ? vlipReference(t) : walkReference(t, cfg.walk);
}

Vec3 pivotAt(const ScenarioConfig& cfg, double t) {
  return cfg.kind == ScenarioKind::kVlip ? Vec3::Zero() : copSchedule(t, cfg.walk);
}

std::vector<TelemetryRecord> runSimulation(const ScenarioConfig& cfg,
                                           const StepObserver& observer) {
  cfg.validate();
  const int n_steps = cfg.steps();
  const VecX P = VecX::Ones(kRefDim);

  PendulumState state;
  state.m = cfg.mass;
  state.g = cfg.gravity;
  state.u = pivotAt(cfg, 0.0);
  const ReferenceVector ref0 = targetReference(cfg, 0.0);
  state.c = toCartesian(ref0, state.u).c_t;
  state.c_dot.setZero();

  GovernorState gov;
  gov.x_r = ref0.x;
  gov.x_w = ref0.x;

  std::vector<TelemetryRecord> records;
  records.reserve(n_steps);

  for (int k = 0; k < n_steps; ++k) {
    const double t = k * cfg.dt;
    try {
      state.u = pivotAt(cfg, t);
      const ReferenceVector target = targetReference(cfg, t);
      gov.x_r = target.x;
      if (!cfg.erg_enabled) gov.x_w = gov.x_r;

      ReferenceVector applied{cfg.chart(), gov.x_w};
      const ConstraintLinearization lin =
          linearize(state, applied, cfg.gains, cfg.constraints, cfg.rom);
      const VecX h_w = lin.h;
      const VecX h_r = lin.predict(gov.x_r);
      const VecX x_w_before = gov.x_w;

      TelemetryRecord rec;
      rec.t = t;
      rec.x_r = gov.x_r;
      rec.x_w = x_w_before;
      rec.h_r = h_r;
      rec.h_w = h_w;

      if (cfg.erg_enabled) {
        ErgStepResult res = ergStep(gov, lin, h_r, h_w, cfg.rates, cfg.dt);
        const ErgDiagnostics diag = lyapunov(gov.x_r, x_w_before, res.info, P);
        rec.V = diag.V;
        rec.V_dot = diag.V_dot;
        rec.branch = res.info.branch;
        if (observer) {
          observer({k, t, &state, &lin, &gov.x_r, &x_w_before, &h_r, &res.info, &diag});
        }
        gov = std::move(res.next);
      } else {
        gov.h_r = h_r;
        gov.h_w = h_w;
        gov.last_branch = Branch::kIdle;
        rec.branch = Branch::kIdle;
        if (observer) {
          observer({k, t, &state, &lin, &gov.x_r, &x_w_before, &h_r, nullptr, nullptr});
        }
      }

      applied.x = gov.x_w;
      const ThrusterCommand cmd =
          thrusterFeedback(state, toCartesian(applied, state.u), cfg.gains);
      const GrfEstimate est = estimateGrf(state, cmd, cfg.rom);

      const VlipChartResult q = vlipFromCartesian(state.c, state.u, state.c_dot);
      rec.c = state.c;
      rec.c_dot = state.c_dot;
      rec.theta = q.q.theta;
      rec.phi = q.q.phi;
      rec.l = q.q.l;
      rec.u_tc = cmd.u_tc;
      rec.u_r = cmd.u_r;
      rec.lambda = est.lambda;
      rec.u_g = est.u_g;
      records.push_back(std::move(rec));

      state = stepRk4(state, cmd, cfg.dt, cfg.rom);
      if (!state.c.allFinite() || !state.c_dot.allFinite()) {
        throw SimulationError("non-finite plant state");
      }
    } catch (const std::exception& e) {
      std::ostringstream os;
      os << "step " << k << " (t = " << t << " s): " << e.what();
      throw SimulationError(os.str());
    }
  }
  return records;
}

CompliantPlantParams compliantPlantFor(const ScenarioConfig& cfg) {
  CompliantPlantParams plant;
  plant.m = cfg.mass;
  plant.g = cfg.gravity;
  plant.ground = cfg.ground;
  return plant;
}

SlipReport replayOnCompliantGround(const ScenarioConfig& cfg,
                                   const std::vector<TelemetryRecord>& records,
                                   const CompliantPlantParams* plant_override) {
  const CompliantPlantParams plant =
      plant_override ? *plant_override : compliantPlantFor(cfg);
  SlipReport report;
  if (records.empty()) return report;

  Vec3 pivot = pivotAt(cfg, records.front().t);
  CompliantState s =
      makeCompliantState(records.front().c, records.front().c_dot, pivot, plant);

  for (const TelemetryRecord& rec : records) {
    const Vec3 next_pivot = pivotAt(cfg, rec.t);
    if ((next_pivot - pivot).norm() > 0.0) {
      // New stance foot: plant it and keep the accumulated slip.
      const double slip = s.slip;
      s = makeCompliantState(s.c, s.c_dot, next_pivot, plant);
      s.slip = slip;
      pivot = next_pivot;
    }
    PendulumState ps;
    ps.m = plant.m;
    ps.g = plant.g;
    ps.c = s.c;
    ps.c_dot = s.c_dot;
    ps.u = s.p;
    const ReferenceVector applied{cfg.chart(), rec.x_w};
    const ThrusterCommand cmd = thrusterFeedback(ps, toCartesian(applied, pivot), cfg.gains);
    CompliantStepResult step;
    try {
      step = compliantPlantStep(s, cmd, plant, cfg.dt);
    } catch (const SimulationError& e) {
      report.diverged = true;
      report.diverged_at = rec.t;
      report.message = e.what();
      break;
    }
    s = step.state;
    report.slip_history.push_back(s.slip);
    report.normal_force.push_back(step.normal_force);
    report.max_normal_force = std::max(report.max_normal_force, step.normal_force);
    report.final_normal_force = step.normal_force;
  }
  report.slip = s.slip;
  return report;
}

}  // namespace grfgov
