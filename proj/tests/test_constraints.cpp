#include <gtest/gtest.h>

#include <random>

#include "grfgov/constraints.hpp"

using namespace grfgov;

namespace {

PendulumState tiltedState() {
  PendulumState s;
  s.u = Vec3(0.05, -0.02, 0.0);
  s.c = s.u + cartesianFromVlip({0.3, 0.7, 0.45, 0, 0, 0}, Vec3::Zero());
  s.c_dot = Vec3(0.2, -0.1, 0.05);
  return s;
}

ConstraintParams params(Chart chart, EvalPoint point, bool angle = true) {
  ConstraintParams p;
  p.chart = chart;
  p.eval_point = point;
  p.include_angle = angle;
  return p;
}

double relErr(const MatX& a, const MatX& b) { return (a - b).norm() / std::max(1.0, b.norm()); }

}  // namespace

TEST(EvalConstraints, StaticVerticalEquilibrium) {
  PendulumState s;
  s.c = Vec3(0.0, 0.0, 0.6);
  const ConstraintParams p = params(Chart::kVlip, EvalPoint::kState);
  const ConstraintEval ev =
      evaluateConstraints(s, ReferenceVector::fromVlip({0, 0, 0.6, 0, 0, 0}), TrackingGains{}, p);
  EXPECT_NEAR(ev.u_g.z(), 49.05, 1e-12);
  ASSERT_EQ(ev.h.size(), 4);
  EXPECT_NEAR(ev.h(0), 22.0725, 1e-12);
  EXPECT_NEAR(ev.h(1), 22.0725, 1e-12);
  EXPECT_NEAR(ev.h(2), 29.05, 1e-12);
  EXPECT_NEAR(ev.h(3), -p.theta_min, 1e-15);
  EXPECT_LT(ev.h(3), 0.0);
}

TEST(EvalConstraints, ZeroTangentialForceRows) {
  PendulumState s;
  s.c = Vec3(0.0, 0.0, 0.5);
  ConstraintParams p = params(Chart::kCartesian, EvalPoint::kState);
  for (double dz : {-0.05, 0.0, 0.03}) {
    const ConstraintEval ev = evaluateConstraints(
        s, ReferenceVector::fromCartesian(Vec3(0, 0, 0.5 + dz), Vec3::Zero()), TrackingGains{}, p);
    EXPECT_EQ(ev.u_g.x(), 0.0);
    EXPECT_EQ(ev.u_g.y(), 0.0);
    EXPECT_DOUBLE_EQ(ev.h(0), p.mu_s * ev.u_g.z());
    EXPECT_DOUBLE_EQ(ev.h(1), p.mu_s * ev.u_g.z());
  }
}

TEST(EvalConstraints, LowNormalForceViolatesFloor) {
  PendulumState s;
  s.c = Vec3(0.0, 0.0, 0.5);
  const ConstraintParams p = params(Chart::kCartesian, EvalPoint::kState);
  // A reference 5 cm below the mass asks the leg to retract hard.
  const VecX h = evalConstraints(s, ReferenceVector::fromCartesian(Vec3(0, 0, 0.45), Vec3::Zero()),
                                 TrackingGains{}, p);
  EXPECT_LT(h(2), 0.0);
}

TEST(EvalConstraints, ChartMismatch) {
  PendulumState s;
  s.c = Vec3(0.0, 0.0, 0.5);
  const ConstraintParams p = params(Chart::kVlip, EvalPoint::kState);
  EXPECT_THROW(evalConstraints(s, ReferenceVector::fromCartesian(s.c, Vec3::Zero()),
                               TrackingGains{}, p),
               ChartMismatchError);
  EXPECT_THROW(linearize(s, ReferenceVector::fromCartesian(s.c, Vec3::Zero()), TrackingGains{}, p),
               ChartMismatchError);
}

TEST(EvalConstraints, DegeneratePivot) {
  PendulumState s;
  const ConstraintParams p = params(Chart::kCartesian, EvalPoint::kState);
  EXPECT_THROW(evalConstraints(s, ReferenceVector::fromCartesian(Vec3(0, 0, 0.3), Vec3::Zero()),
                               TrackingGains{}, p),
               DegeneratePivotError);
}

TEST(ChartJacobian, MatchesFiniteDifference) {
  const ReferenceVector ref = ReferenceVector::fromVlip({0.4, -0.6, 0.5, 0.3, 0.8, -0.2});
  const MatX T = chartJacobian(ref);
  const double h = 1e-6;
  for (int i = 0; i < kRefDim; ++i) {
    ReferenceVector hi = ref, lo = ref;
    hi.x(i) += h;
    lo.x(i) -= h;
    const CartesianReference a = toCartesian(hi, Vec3::Zero()), b = toCartesian(lo, Vec3::Zero());
    Eigen::Matrix<double, 6, 1> col;
    col << (a.c_t - b.c_t) / (2 * h), (a.c_t_dot - b.c_t_dot) / (2 * h);
    EXPECT_LE((T.col(i) - col).norm(), 1e-8) << "column " << i;
  }
  EXPECT_EQ(chartJacobian(ReferenceVector::fromCartesian(Vec3(1, 2, 3), Vec3::Zero())),
            MatX::Identity(6, 6));
}

TEST(Linearize, AffineIdentityAtPoint) {
  const PendulumState s = tiltedState();
  for (Chart chart : {Chart::kVlip, Chart::kCartesian}) {
    for (EvalPoint point : {EvalPoint::kState, EvalPoint::kReferencePose}) {
      const ConstraintParams p = params(chart, point);
      const ReferenceVector ref =
          chart == Chart::kVlip
              ? ReferenceVector::fromVlip({0.35, 0.6, 0.42, 0.1, -0.2, 0.05})
              : ReferenceVector::fromCartesian(s.c + Vec3(0.01, 0.02, -0.01), Vec3(0.1, 0, 0));
      const ConstraintLinearization lin = linearize(s, ref, TrackingGains{}, p);
      EXPECT_LE((lin.predict(ref.x) - lin.h).cwiseAbs().maxCoeff(), 1e-12);
      EXPECT_EQ(lin.ref_point, ref.x);
    }
  }
}

TEST(Linearize, MatchesFiniteDifferences) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const TrackingGains gains;
  for (Chart chart : {Chart::kVlip, Chart::kCartesian}) {
    for (EvalPoint point : {EvalPoint::kState, EvalPoint::kReferencePose}) {
      const ConstraintParams p = params(chart, point);
      for (int i = 0; i < 25; ++i) {
        PendulumState s;
        s.u = Vec3(0.1 * unit(rng), 0.1 * unit(rng), 0.0);
        const VlipCoords qs{0.1 + 0.5 * std::abs(unit(rng)), M_PI * unit(rng),
                            0.35 + 0.2 * std::abs(unit(rng)), 0, 0, 0};
        s.c = cartesianFromVlip(qs, s.u);
        s.c_dot = 0.3 * Vec3(unit(rng), unit(rng), unit(rng));
        VlipCoords qr = qs;
        qr.theta += 0.05 * unit(rng);
        qr.phi += 0.05 * unit(rng);
        qr.l += 0.02 * unit(rng);
        qr.theta_dot = 0.3 * unit(rng);
        qr.phi_dot = 0.3 * unit(rng);
        qr.l_dot = 0.1 * unit(rng);
        const ReferenceVector ref = chart == Chart::kVlip
                                        ? ReferenceVector::fromVlip(qr)
                                        : ReferenceVector::fromCartesian(
                                              cartesianFromVlip(qr, s.u),
                                              cartesianVelocityFromVlip(qr));
        const ConstraintLinearization lin = linearize(s, ref, gains, p);
        if (lin.sign_ambiguous) continue;
        const MatX fd = fdJacobian(s, ref, gains, p, 1e-6);
        EXPECT_LE(relErr(lin.J_r, fd), 1e-6)
            << chartName(chart) << "/" << evalPointName(point) << " sample " << i;
      }
    }
  }
}

TEST(Linearize, AngleRowIgnoresVelocities) {
  const PendulumState s = tiltedState();
  for (Chart chart : {Chart::kVlip, Chart::kCartesian}) {
    const ConstraintParams p = params(chart, EvalPoint::kState);
    const ReferenceVector ref =
        chart == Chart::kVlip ? ReferenceVector::fromVlip({0.3, 0.7, 0.45, 0.2, 0.1, 0.0})
                              : ReferenceVector::fromCartesian(s.c, Vec3(0.1, 0.2, 0.3));
    const ConstraintLinearization lin = linearize(s, ref, TrackingGains{}, p);
    EXPECT_EQ(lin.J_r.row(3).tail<3>().norm(), 0.0);
  }
}

TEST(Linearize, CartesianStateEvaluationIsExactlyAffine) {
  const PendulumState s = tiltedState();
  ConstraintParams p = params(Chart::kCartesian, EvalPoint::kState, false);
  for (bool projection : {true, false}) {
    TrackingGains gains;
    gains.use_radial_projection = projection;
    const ReferenceVector ref0 = ReferenceVector::fromCartesian(s.c, s.c_dot);
    const ConstraintLinearization lin = linearize(s, ref0, gains, p);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int i = 0; i < 50; ++i) {
      ReferenceVector ref1 = ref0;
      for (int k = 0; k < kRefDim; ++k) ref1.x(k) += 0.01 * unit(rng);
      const ConstraintEval ev = evaluateConstraints(s, ref1, gains, p);
      if ((ev.u_g.x() >= 0) != (lin.frozen_signs[0] > 0)) continue;
      if ((ev.u_g.y() >= 0) != (lin.frozen_signs[1] > 0)) continue;
      EXPECT_LE((lin.predict(ref1.x) - ev.h).cwiseAbs().maxCoeff(), 1e-10);
    }
  }
}

TEST(Linearize, MirrorSymmetryOfFrictionRows) {
  // Reflecting the plant and the reference through the x = 0 plane negates
  // the tangential force: frozen sign flips, friction values stay put.
  const PendulumState s = tiltedState();
  PendulumState m = s;
  const Vec3 flip(-1.0, 1.0, 1.0);
  m.u = s.u.cwiseProduct(flip);
  m.c = s.c.cwiseProduct(flip);
  m.c_dot = s.c_dot.cwiseProduct(flip);
  const ConstraintParams p = params(Chart::kCartesian, EvalPoint::kState);
  const Vec3 ct = s.c + Vec3(0.02, -0.01, 0.01), cv(0.1, 0.05, 0.0);
  const ConstraintLinearization a =
      linearize(s, ReferenceVector::fromCartesian(ct, cv), TrackingGains{}, p);
  const ConstraintLinearization b = linearize(
      m, ReferenceVector::fromCartesian(ct.cwiseProduct(flip), cv.cwiseProduct(flip)),
      TrackingGains{}, p);
  EXPECT_EQ(a.frozen_signs[0], -b.frozen_signs[0]);
  EXPECT_EQ(a.frozen_signs[1], b.frozen_signs[1]);
  EXPECT_NEAR(a.h(0), b.h(0), 1e-12);
  EXPECT_NEAR(a.h(1), b.h(1), 1e-12);
  EXPECT_NEAR(a.h(2), b.h(2), 1e-12);
}

TEST(Linearize, NullspaceDirectionsAreSecondOrder) {
  const PendulumState s = tiltedState();
  for (Chart chart : {Chart::kVlip, Chart::kCartesian}) {
    const ConstraintParams p = params(chart, EvalPoint::kReferencePose);
    const ReferenceVector ref0 =
        chart == Chart::kVlip ? ReferenceVector::fromVlip({0.32, 0.68, 0.44, 0.1, 0.0, 0.0})
                              : ReferenceVector::fromCartesian(s.c + Vec3(0.01, 0.0, 0.0),
                                                               Vec3(0.1, 0.0, 0.0));
    const ConstraintLinearization lin = linearize(s, ref0, TrackingGains{}, p);
    Eigen::FullPivLU<MatX> lu(lin.J_r);
    const MatX K = lu.kernel();
    ASSERT_GE(K.cols(), 1);
    const VecX v = K.col(0).normalized();
    auto delta = [&](double eps) {
      ReferenceVector r = ref0;
      r.x += eps * v;
      return (evalConstraints(s, r, TrackingGains{}, p) - lin.h).cwiseAbs().maxCoeff();
    };
    const double d1 = delta(1e-3), d2 = delta(5e-4);
    EXPECT_LE(d1, 1e-3) << chartName(chart);
    // Second order: halving eps quarters the change (or it vanishes).
    if (d1 > 1e-12) EXPECT_LT(d2 / d1, 0.3) << chartName(chart);
  }
}

TEST(FdJacobian, ConstantFunctionAndStep) {
  const PendulumState s = tiltedState();
  ConstraintParams p = params(Chart::kVlip, EvalPoint::kState);
  const ReferenceVector ref = ReferenceVector::fromVlip({0.3, 0.7, 0.45, 0, 0, 0});
  EXPECT_THROW(fdJacobian(s, ref, TrackingGains{}, p, 0.0), std::invalid_argument);
  // With zero gains the reference cannot move the GRF; only the angle row responds.
  TrackingGains zero;
  zero.kp_t = zero.kd_t = zero.kp_r = zero.kd_r = 0.0;
  const MatX fd = fdJacobian(s, ref, zero, p, 1e-6);
  EXPECT_LE(fd.topRows(3).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(FdJacobian, VlipChartConvergesQuadratically) {
  const PendulumState s = tiltedState();
  const ConstraintParams p = params(Chart::kVlip, EvalPoint::kReferencePose);
  const ReferenceVector ref = ReferenceVector::fromVlip({0.35, 0.6, 0.42, 0.4, -0.3, 0.1});
  const MatX J = linearize(s, ref, TrackingGains{}, p).J_r;
  const double e1 = (fdJacobian(s, ref, TrackingGains{}, p, 1e-2) - J).norm();
  const double e2 = (fdJacobian(s, ref, TrackingGains{}, p, 1e-3) - J).norm();
  EXPECT_GT(e1 / e2, 50.0);
  EXPECT_LT(e1 / e2, 200.0);
}
