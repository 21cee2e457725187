#include "grfgov/checks.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace grfgov {

bool CheckReport::passed() const {
  for (const auto& item : items) {
    if (!item.passed) return false;
  }
  return !items.empty();
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

struct Sample {
  PendulumState state;
  ReferenceVector ref;
};

Sample randomSample(Chart chart, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> tilt(0.1, 0.8);
  std::uniform_real_distribution<double> heading(-M_PI, M_PI);
  std::uniform_real_distribution<double> length(0.3, 0.6);

  Sample s;
  s.state.u = Vec3(0.2 * unit(rng), 0.2 * unit(rng), 0.0);
  VlipCoords q{tilt(rng), heading(rng), length(rng), 0.0, 0.0, 0.0};
  s.state.c = cartesianFromVlip(q, s.state.u);
  s.state.c_dot = 0.5 * Vec3(unit(rng), unit(rng), unit(rng));

  if (chart == Chart::kVlip) {
    VlipCoords r{tilt(rng), heading(rng), length(rng), unit(rng), unit(rng), 0.5 * unit(rng)};
    s.ref = ReferenceVector::fromVlip(r);
  } else {
    const Vec3 c_t = s.state.c + 0.05 * Vec3(unit(rng), unit(rng), unit(rng));
    const Vec3 c_t_dot = 0.5 * Vec3(unit(rng), unit(rng), unit(rng));
    s.ref = ReferenceVector::fromCartesian(c_t, c_t_dot);
  }
  return s;
}

}  // namespace

JacobianStats compareJacobians(Chart chart, EvalPoint point, int samples,
                               unsigned long long seed, double rel_tol) {
  const ScenarioConfig base = ScenarioConfig::defaults(
      chart == Chart::kVlip ? ScenarioKind::kVlip : ScenarioKind::kWalk);
  ConstraintParams params = base.constraints;
  params.eval_point = point;
  params.include_angle = true;

  std::mt19937_64 rng(seed);
  JacobianStats stats;
  const double step = 1e-6;
  while (stats.tested < samples) {
    const Sample s = randomSample(chart, rng);
    const ConstraintLinearization lin = linearize(s.state, s.ref, base.gains, params, base.rom);

    // Exclude samples whose friction rows sit within the finite-difference
    // reach of a sign switch.
    const ConstraintEval ev = evaluateConstraints(s.state, s.ref, base.gains, params, base.rom);
    const MatX dgrf_x = (lin.J_r.row(2) * params.mu_s - lin.J_r.row(0)) * lin.frozen_signs[0];
    const MatX dgrf_y = (lin.J_r.row(2) * params.mu_s - lin.J_r.row(1)) * lin.frozen_signs[1];
    if (std::abs(ev.u_g.x()) < 1e-6 * std::max(1.0, dgrf_x.lpNorm<1>()) ||
        std::abs(ev.u_g.y()) < 1e-6 * std::max(1.0, dgrf_y.lpNorm<1>())) {
      ++stats.excluded;
      continue;
    }

    const MatX fd = fdJacobian(s.state, s.ref, base.gains, params, step, base.rom);
    const double rel = (lin.J_r - fd).norm() / std::max(1.0, fd.norm());
    stats.worst_rel = std::max(stats.worst_rel, rel);
    if (!(rel <= rel_tol)) ++stats.failed;
    ++stats.tested;
  }
  return stats;
}

LyapunovStats lyapunovAlongRun(const ScenarioConfig& cfg_in) {
  ScenarioConfig cfg = cfg_in;
  cfg.erg_enabled = true;
  const VecX P = VecX::Ones(kRefDim);
  LyapunovStats stats;

  runSimulation(cfg, [&](const StepContext& ctx) {
    const ErgStepInfo& info = *ctx.info;
    const double min_hw = ctx.lin->h.minCoeff();
    const double min_hr = ctx.h_r->minCoeff();
    if (min_hw >= 0.0 || min_hr >= 0.0) {
      ++stats.admissible_steps;
      const double vdot = ctx.diag->V_dot;
      stats.max_admissible_vdot = std::max(stats.max_admissible_vdot, vdot);
      if (vdot > 1e-12) ++stats.vdot_violations;

      // Centered difference of V along the update direction with x_r frozen.
      const VecX& x_r = *ctx.x_r;
      const VecX& x_w = *ctx.x_w;
      const double h = cfg.dt;
      const VecX ahead = x_r - (x_w + h * info.x_w_dot);
      const VecX behind = x_r - (x_w - h * info.x_w_dot);
      const double fd = (ahead.dot(P.asDiagonal() * ahead) -
                         behind.dot(P.asDiagonal() * behind)) /
                        (2.0 * h);
      const double err = std::abs(fd - vdot);
      const double rel = err / std::max(std::abs(vdot), 1e-300);
      if (err > 1e-12) {
        stats.worst_fd_rel = std::max(stats.worst_fd_rel, rel);
        if (rel > 1e-4) ++stats.fd_failures;
      }
    }
    if (info.branch == Branch::kTangential) {
      ++stats.tangential_steps;
      const double inv = (info.C_r * info.v_t).norm();
      const double scaled = inv / std::max(1.0, info.v_t.norm());
      stats.worst_nullspace = std::max(stats.worst_nullspace, scaled);
      if (scaled > 1e-9) ++stats.nullspace_failures;
    }
  });
  return stats;
}

Eigen::Vector4d kktSolve(const PendulumState& state, const ThrusterCommand& cmd,
                         const RomOptions& opts) {
  const Vec3 J = state.c - state.u;
  Eigen::Matrix4d K = Eigen::Matrix4d::Zero();
  K.topLeftCorner<3, 3>() = state.m * Mat3::Identity();
  K.topRightCorner<3, 1>() = -J;
  K.bottomLeftCorner<1, 3>() = J.transpose();
  Eigen::Vector4d rhs;
  rhs.head<3>() = state.m * state.gravity() + cmd.u_tc;
  rhs(3) = cmd.u_r + J.dot(state.u_ddot) -
           (opts.exact_length_constraint ? state.c_dot.squaredNorm() : 0.0);
  return K.fullPivLu().solve(rhs);
}

ContactComparison steadyContact(double tilt, double length, double duration) {
  const ScenarioConfig cfg = ScenarioConfig::defaults(ScenarioKind::kVlip);
  const CompliantPlantParams plant = compliantPlantFor(cfg);
  const VlipCoords q{tilt, 0.0, length, 0.0, 0.0, 0.0};
  const Vec3 pivot = Vec3::Zero();
  const CartesianReference target{cartesianFromVlip(q, pivot), Vec3::Zero()};

  CompliantState s = makeCompliantState(target.c_t, Vec3::Zero(), pivot, plant);
  const int steps = static_cast<int>(std::llround(duration / cfg.dt));
  ContactComparison out;
  for (int k = 0; k < steps; ++k) {
    PendulumState ps;
    ps.m = plant.m;
    ps.g = plant.g;
    ps.c = s.c;
    ps.c_dot = s.c_dot;
    ps.u = s.p;
    const ThrusterCommand cmd = thrusterFeedback(ps, target, cfg.gains);
    const CompliantStepResult res = compliantPlantStep(s, cmd, plant, cfg.dt);
    s = res.state;
    out.compliant_normal = res.normal_force;
    if (k == steps - 1) {
      ps.c = s.c;
      ps.c_dot = s.c_dot;
      ps.u = s.p;
      out.rom_normal = estimateGrf(ps, thrusterFeedback(ps, target, cfg.gains)).u_g.z();
    }
  }
  out.rel_error = std::abs(out.compliant_normal - out.rom_normal) /
                  std::max(std::abs(out.rom_normal), 1e-12);
  return out;
}

CheckReport runJacobianSuite() {
  CheckReport report{"jacobian", {}};
  unsigned long long seed = 20240601;
  for (Chart chart : {Chart::kVlip, Chart::kCartesian}) {
    for (EvalPoint point : {EvalPoint::kState, EvalPoint::kReferencePose}) {
      const JacobianStats st = compareJacobians(chart, point, 100, seed++);
      report.items.push_back(
          {std::string("J_r vs central differences, chart ") + chartName(chart) +
               ", evaluated at " + evalPointName(point),
           st.failed == 0,
           std::to_string(st.tested) + " samples, " + std::to_string(st.excluded) +
               " excluded, worst rel " + fmt(st.worst_rel)});
    }
  }
  return report;
}

CheckReport runLyapunovSuite() {
  CheckReport report{"lyapunov", {}};
  for (ScenarioKind kind : {ScenarioKind::kVlip, ScenarioKind::kWalk}) {
    const LyapunovStats st = lyapunovAlongRun(ScenarioConfig::defaults(kind));
    const std::string name = scenarioName(kind);
    report.items.push_back({name + ": Vdot <= 1e-12 on admissible steps",
                            st.vdot_violations == 0,
                            std::to_string(st.admissible_steps) + " admissible steps, max Vdot " +
                                fmt(st.max_admissible_vdot)});
    report.items.push_back({name + ": Vdot matches centered difference of V",
                            st.fd_failures == 0, "worst rel " + fmt(st.worst_fd_rel)});
    report.items.push_back({name + ": tangential update stays in the kernel",
                            st.nullspace_failures == 0,
                            std::to_string(st.tangential_steps) + " tangential steps, worst " +
                                fmt(st.worst_nullspace)});
  }
  return report;
}

CheckReport runOracleSuite() {
  CheckReport report{"oracle", {}};

  {
    PendulumState s;
    s.c = Vec3(0.0, 0.0, 0.5);
    const Vec3 ug = estimateGrf(s, ThrusterCommand{}).u_g;
    const double err = (ug - Vec3(0.0, 0.0, s.m * s.g)).cwiseAbs().maxCoeff();
    report.items.push_back(
        {"static vertical pendulum carries m g", err <= 1e-12, "error " + fmt(err)});
  }

  {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      PendulumState s;
      s.m = 2.0 + 4.0 * std::abs(unit(rng));
      s.u = 0.2 * Vec3(unit(rng), unit(rng), 0.0);
      s.c = s.u + Vec3(0.4 * unit(rng), 0.4 * unit(rng), 0.3 + 0.4 * std::abs(unit(rng)));
      s.c_dot = Vec3(unit(rng), unit(rng), unit(rng));
      s.u_ddot = 0.5 * Vec3(unit(rng), unit(rng), unit(rng));
      ThrusterCommand cmd;
      cmd.u_tc = 30.0 * Vec3(unit(rng), unit(rng), unit(rng));
      cmd.u_r = 5.0 * unit(rng);
      RomOptions opts;
      opts.exact_length_constraint = (i % 2) == 1;
      const Eigen::Vector4d ref = kktSolve(s, cmd, opts);
      const Vec3 acc = romAccel(s, cmd, opts);
      const double lam = solveLambda(s, cmd, opts);
      for (int k = 0; k < 3; ++k) {
        worst = std::max(worst, std::abs(acc(k) - ref(k)) / std::max(1.0, std::abs(ref(k))));
      }
      worst = std::max(worst, std::abs(lam - ref(3)) / std::max(1.0, std::abs(ref(3))));
    }
    report.items.push_back(
        {"acceleration and multiplier match 4x4 saddle-point solves", worst <= 1e-10,
         "worst rel " + fmt(worst)});
  }

  for (double tilt : {0.0, 0.2}) {
    const ContactComparison cc = steadyContact(tilt, 0.4);
    report.items.push_back({"settled compliant normal force vs reduced model, tilt " + fmt(tilt),
                            cc.rel_error <= 0.02,
                            fmt(cc.compliant_normal) + " N vs " + fmt(cc.rom_normal) +
                                " N, rel " + fmt(cc.rel_error)});
  }
  return report;
}

CheckReport runCheckSuite(const std::string& name) {
  if (name == "jacobian") return runJacobianSuite();
  if (name == "lyapunov") return runLyapunovSuite();
  if (name == "oracle") return runOracleSuite();
  throw std::invalid_argument("unknown suite '" + name +
                              "' (expected jacobian, lyapunov or oracle)");
}

}  // namespace grfgov
