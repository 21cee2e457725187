#pragma once

// Ground-reaction-force and posture constraints expressed as functions of the
// governor's reference, plus their affine linearization h ~ J_r x + d_r.
//
// Row layout: [mu_s u_gz - |u_gx|, mu_s u_gz - |u_gy|, u_gz - f_min,
//              (theta_ref - theta_min)].

#include <array>

#include "grfgov/controllers.hpp"

namespace grfgov {

enum class Chart {
  kVlip,       // x = [theta, phi, l, theta_dot, phi_dot, l_dot] about the pivot
  kCartesian,  // x = [c_t; c_t_dot]
};

const char* chartName(Chart chart);

// Where the hypothetical GRF is evaluated.
//  kState:         pendulum geometry of the current plant state; the reference
//                  enters only through the tracking law. Exactly affine in a
//                  Cartesian reference between friction sign switches.
//  kReferencePose: pendulum geometry of the reference pose (the plant is
//                  assumed to sit on the reference), tracking effort still
//                  measured against the current plant state.
enum class EvalPoint { kState, kReferencePose };

const char* evalPointName(EvalPoint point);

inline constexpr int kRefDim = 6;

struct ReferenceVector {
  Chart chart = Chart::kCartesian;
  VecX x = VecX::Zero(kRefDim);

  static ReferenceVector fromVlip(const VlipCoords& q);
  static ReferenceVector fromCartesian(const Vec3& c_t, const Vec3& c_t_dot);
  VlipCoords asVlip() const;
  int dim() const { return static_cast<int>(x.size()); }
};

/// Position and velocity targets implied by a reference about a pivot.
CartesianReference toCartesian(const ReferenceVector& ref, const Vec3& pivot);

/// d(c_t, c_t_dot)/dx, 6 x 6.
MatX chartJacobian(const ReferenceVector& ref);

struct ConstraintParams {
  double mu_s = 0.45;
  double f_min = 20.0;                 // [N]
  double theta_min = 0.0872664625997;  // 5 deg [rad]
  bool include_angle = true;
  Chart chart = Chart::kVlip;
  EvalPoint eval_point = EvalPoint::kState;

  int rows() const { return include_angle ? 4 : 3; }
  void validate() const;
};

struct ConstraintEval {
  VecX h;
  Vec3 u_g = Vec3::Zero();
  double theta_ref = 0.0;
};

struct ConstraintLinearization {
  VecX h;
  MatX J_r;
  VecX d_r;
  VecX ref_point;
  std::array<int, 2> frozen_signs{1, 1};
  bool sign_ambiguous = false;  // |u_gx| or |u_gy| < 1e-9 N at ref_point

  /// Affine prediction J_r x + d_r.
  VecX predict(const VecX& x) const { return J_r * x + d_r; }
};

ConstraintEval evaluateConstraints(const PendulumState& state,
                                   const ReferenceVector& ref,
                                   const TrackingGains& gains,
                                   const ConstraintParams& params,
                                   const RomOptions& rom = {});

VecX evalConstraints(const PendulumState& state, const ReferenceVector& ref,
                     const TrackingGains& gains, const ConstraintParams& params,
                     const RomOptions& rom = {});

/// Analytic Jacobian with friction absolute values resolved by the sign of
/// u_gx, u_gy at ref0.
ConstraintLinearization linearize(const PendulumState& state,
                                  const ReferenceVector& ref0,
                                  const TrackingGains& gains,
                                  const ConstraintParams& params,
                                  const RomOptions& rom = {});

/// Central finite differences of evalConstraints. Test oracle.
MatX fdJacobian(const PendulumState& state, const ReferenceVector& ref0,
                const TrackingGains& gains, const ConstraintParams& params,
                double step, const RomOptions& rom = {});

}  // namespace grfgov
