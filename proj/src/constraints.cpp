#include "grfgov/constraints.hpp"

#include <cmath>
#include <stdexcept>

namespace grfgov {

const char* chartName(Chart chart) {
  return chart == Chart::kVlip ? "vlip" : "cartesian";
}

const char* evalPointName(EvalPoint point) {
  return point == EvalPoint::kState ? "state" : "reference";
}

ReferenceVector ReferenceVector::fromVlip(const VlipCoords& q) {
  ReferenceVector r;
  r.chart = Chart::kVlip;
  r.x << q.theta, q.phi, q.l, q.theta_dot, q.phi_dot, q.l_dot;
  return r;
}

ReferenceVector ReferenceVector::fromCartesian(const Vec3& c_t, const Vec3& c_t_dot) {
  ReferenceVector r;
  r.chart = Chart::kCartesian;
  r.x << c_t, c_t_dot;
  return r;
}

VlipCoords ReferenceVector::asVlip() const {
  if (chart != Chart::kVlip) {
    throw ChartMismatchError("reference is not in the vlip chart");
  }
  return {x(0), x(1), x(2), x(3), x(4), x(5)};
}

CartesianReference toCartesian(const ReferenceVector& ref, const Vec3& pivot) {
  if (ref.dim() != kRefDim) {
    throw std::invalid_argument("reference vector must have dimension 6");
  }
  CartesianReference out;
  if (ref.chart == Chart::kCartesian) {
    out.c_t = ref.x.head<3>();
    out.c_t_dot = ref.x.tail<3>();
  } else {
    const VlipCoords q = ref.asVlip();
    out.c_t = cartesianFromVlip(q, pivot);
    out.c_t_dot = cartesianVelocityFromVlip(q);
  }
  return out;
}

MatX chartJacobian(const ReferenceVector& ref) {
  MatX T = MatX::Identity(kRefDim, kRefDim);
  if (ref.chart == Chart::kCartesian) return T;

  const VlipCoords q = ref.asVlip();
  const double st = std::sin(q.theta), ct = std::cos(q.theta);
  const double sp = std::sin(q.phi), cp = std::cos(q.phi);
  const Vec3 d(st * cp, st * sp, ct);
  const Vec3 d_t(ct * cp, ct * sp, -st);
  const Vec3 d_p(-st * sp, st * cp, 0.0);
  const Vec3 d_tt = -d;
  const Vec3 d_tp(-ct * sp, ct * cp, 0.0);
  const Vec3 d_pp(-st * cp, -st * sp, 0.0);

  T.setZero();
  // position block
  T.block<3, 1>(0, 0) = q.l * d_t;
  T.block<3, 1>(0, 1) = q.l * d_p;
  T.block<3, 1>(0, 2) = d;
  // velocity block: c_dot = l_dot d + l theta_dot d_t + l phi_dot d_p
  T.block<3, 1>(3, 0) = q.l_dot * d_t + q.l * q.theta_dot * d_tt + q.l * q.phi_dot * d_tp;
  T.block<3, 1>(3, 1) = q.l_dot * d_p + q.l * q.theta_dot * d_tp + q.l * q.phi_dot * d_pp;
  T.block<3, 1>(3, 2) = q.theta_dot * d_t + q.phi_dot * d_p;
  T.block<3, 1>(3, 3) = q.l * d_t;
  T.block<3, 1>(3, 4) = q.l * d_p;
  T.block<3, 1>(3, 5) = d;
  return T;
}

void ConstraintParams::validate() const {
  if (!(mu_s > 0.0)) throw std::invalid_argument("mu_s must be positive");
  if (!(f_min >= 0.0)) throw std::invalid_argument("f_min must be non-negative");
  if (!(theta_min >= 0.0 && theta_min < M_PI / 2)) {
    throw std::invalid_argument("theta_min must lie in [0, pi/2)");
  }
}

namespace {

void checkChart(const ReferenceVector& ref, const ConstraintParams& params) {
  if (ref.chart != params.chart) {
    throw ChartMismatchError(std::string("reference chart '") + chartName(ref.chart) +
                             "' does not match constraint chart '" +
                             chartName(params.chart) + "'");
  }
  if (ref.dim() != kRefDim) {
    throw std::invalid_argument("reference vector must have dimension 6");
  }
}

// Pendulum state the hypothetical GRF is computed on.
PendulumState evalState(const PendulumState& state, const CartesianReference& cart,
                        EvalPoint point) {
  if (point == EvalPoint::kState) return state;
  PendulumState pose = state;
  pose.c = cart.c_t;
  return pose;
}

double tiltOf(const Vec3& r) { return std::atan2(std::hypot(r.x(), r.y()), r.z()); }

// d tilt / d r for r = c_t - u; zero on the vertical axis.
Vec3 tiltGradient(const Vec3& r) {
  const double rho = std::hypot(r.x(), r.y());
  const double r2 = r.squaredNorm();
  if (rho < 1e-12 || r2 < 1e-24) return Vec3::Zero();
  return {r.z() * r.x() / (rho * r2), r.z() * r.y() / (rho * r2), -rho / r2};
}

}  // namespace

ConstraintEval evaluateConstraints(const PendulumState& state, const ReferenceVector& ref,
                                   const TrackingGains& gains,
                                   const ConstraintParams& params, const RomOptions& rom) {
  checkChart(ref, params);
  const CartesianReference cart = toCartesian(ref, state.u);

  // The tracking error is always measured against the plant; only the
  // pendulum geometry moves to the reference pose.
  const PendulumState pose = evalState(state, cart, params.eval_point);
  // thrusterFeedback measures the error from pose.c; shift the reference so
  // the error stays the plant error while J_s and Y come from the pose.
  const CartesianReference shifted{pose.c + (cart.c_t - state.c),
                                   pose.c_dot + (cart.c_t_dot - state.c_dot)};
  const ThrusterCommand cmd = thrusterFeedback(pose, shifted, gains);

  ConstraintEval out;
  const double lambda = solveLambda(pose, cmd, rom);
  out.u_g = grf(pose, lambda);
  out.h.resize(params.rows());
  out.h(0) = params.mu_s * out.u_g.z() - std::abs(out.u_g.x());
  out.h(1) = params.mu_s * out.u_g.z() - std::abs(out.u_g.y());
  out.h(2) = out.u_g.z() - params.f_min;
  if (params.include_angle) {
    out.theta_ref = ref.chart == Chart::kVlip ? ref.x(0) : tiltOf(cart.c_t - state.u);
    out.h(3) = out.theta_ref - params.theta_min;
  }
  return out;
}

VecX evalConstraints(const PendulumState& state, const ReferenceVector& ref,
                     const TrackingGains& gains, const ConstraintParams& params,
                     const RomOptions& rom) {
  return evaluateConstraints(state, ref, gains, params, rom).h;
}

ConstraintLinearization linearize(const PendulumState& state, const ReferenceVector& ref0,
                                  const TrackingGains& gains,
                                  const ConstraintParams& params, const RomOptions& rom) {
  const ConstraintEval ev = evaluateConstraints(state, ref0, gains, params, rom);
  const CartesianReference cart = toCartesian(ref0, state.u);
  const PendulumState pose = evalState(state, cart, params.eval_point);

  const Vec3 J = pendulumJacobian(pose);
  const double J2 = J.squaredNorm();
  const double m = state.m;

  // lambda |J|^2 / m = J . w - kappa with w affine in (c_t, c_t_dot).
  const double s_thrust = gains.use_radial_projection ? 0.0 : 1.0;
  const double s_length = gains.use_length_actuation ? 1.0 : 0.0;
  const double a = -s_thrust * gains.kp_t / m + s_length * gains.kp_r;
  const double b = -s_thrust * gains.kd_t / m + s_length * gains.kd_r;
  const Vec3 e = cart.c_t - state.c;
  const Vec3 e_dot = cart.c_t_dot - state.c_dot;
  const Vec3 w = -state.gravity() -
                 s_thrust * (gains.kp_t * e + gains.kd_t * e_dot) / m +
                 s_length * (gains.kp_r * e + gains.kd_r * e_dot) + state.u_ddot;
  const double kappa = rom.exact_length_constraint ? state.c_dot.squaredNorm() : 0.0;
  const double q = J.dot(w) - kappa;

  Mat3 G_pos = (m * a / J2) * J * J.transpose();
  const Mat3 G_vel = (m * b / J2) * J * J.transpose();
  if (params.eval_point == EvalPoint::kReferencePose) {
    // J itself follows c_t.
    G_pos = m * (J * w.transpose() / J2 + (a / J2) * J * J.transpose() +
                 q * (Mat3::Identity() - 2.0 * J * J.transpose() / J2) / J2);
  }

  Eigen::Matrix<double, 3, kRefDim> G_cart;
  G_cart << G_pos, G_vel;
  const MatX dGrf = G_cart * chartJacobian(ref0);  // 3 x n_x

  ConstraintLinearization lin;
  lin.ref_point = ref0.x;
  lin.h = ev.h;
  for (int axis = 0; axis < 2; ++axis) {
    const double f = ev.u_g(axis);
    if (std::abs(f) < 1e-9) lin.sign_ambiguous = true;
    lin.frozen_signs[axis] = f >= 0.0 ? 1 : -1;
  }

  const int n_c = params.rows();
  lin.J_r.resize(n_c, kRefDim);
  lin.J_r.row(0) = params.mu_s * dGrf.row(2) - lin.frozen_signs[0] * dGrf.row(0);
  lin.J_r.row(1) = params.mu_s * dGrf.row(2) - lin.frozen_signs[1] * dGrf.row(1);
  lin.J_r.row(2) = dGrf.row(2);
  if (params.include_angle) {
    lin.J_r.row(3).setZero();
    if (ref0.chart == Chart::kVlip) {
      lin.J_r(3, 0) = 1.0;
    } else {
      lin.J_r.row(3).head<3>() = tiltGradient(cart.c_t - state.u).transpose();
    }
  }
  lin.d_r = lin.h - lin.J_r * lin.ref_point;
  return lin;
}

MatX fdJacobian(const PendulumState& state, const ReferenceVector& ref0,
                const TrackingGains& gains, const ConstraintParams& params,
                double step, const RomOptions& rom) {
  if (!(step > 0.0)) throw std::invalid_argument("fdJacobian: step must be positive");
  const int n_c = params.rows();
  MatX Jfd(n_c, ref0.dim());
  for (int i = 0; i < ref0.dim(); ++i) {
    ReferenceVector hi = ref0, lo = ref0;
    hi.x(i) += step;
    lo.x(i) -= step;
    Jfd.col(i) = (evalConstraints(state, hi, gains, params, rom) -
                  evalConstraints(state, lo, gains, params, rom)) /
                 (2.0 * step);
  }
  return Jfd;
}

}  // namespace grfgov
