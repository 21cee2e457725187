#pragma once

// Explicit reference governor. The applied reference x_w chases the target
// x_r with three velocity contributions:
//   v_r  direct convergence, active while either reference is admissible
//   v_t  convergence inside the kernel of the target's violated rows
//   v_n  motion along the most violated applied row when both are violated
// followed by an explicit Euler update of x_w.

#include <string_view>

#include "grfgov/constraints.hpp"

namespace grfgov {

struct ErgRates {
  double alpha_r = 1.0;
  double alpha_t = 5.0;
  double alpha_n = 2.0;

  void validate() const;
};

enum class Branch {
  kDirect,      // v_r only
  kTangential,  // v_r + v_t
  kNormalPush,  // v_n toward the target
  kNormalPull,  // v_n away from the target
  kIdle,        // governor bypassed, x_w = x_r
};

std::string_view branchName(Branch b);
Branch branchFromName(std::string_view name);

struct GovernorState {
  VecX x_w;
  VecX x_r;
  Branch last_branch = Branch::kIdle;
  VecX h_r;
  VecX h_w;
};

// Everything the step used, kept for diagnostics.
struct ErgStepInfo {
  Branch branch = Branch::kIdle;
  double alpha_r_hat = 0.0;
  double alpha_t_hat = 0.0;
  double alpha_n_hat = 0.0;  // signed
  MatX C_r;                  // violated target rows of J_r
  MatX N;                    // unit-norm kernel basis columns of C_r
  VecX r_k;                  // unit row used by v_n (empty when unused)
  int k_min = -1;
  VecX v_r, v_t, v_n;
  VecX x_w_dot;
};

struct ErgStepResult {
  GovernorState next;
  ErgStepInfo info;
};

struct ErgDiagnostics {
  double V = 0.0;
  double V_dot = 0.0;
  MatX Q;
};

/// Orthonormal basis of ker(C). Rank tolerance 1e-9 * ||C||_2.
MatX nullspaceBasis(const MatX& C);

/// One governor update. `lin` must be linearized about gov.x_w; h_r and h_w
/// are the target and applied constraint values sharing lin.J_r.
ErgStepResult ergStep(const GovernorState& gov, const ConstraintLinearization& lin,
                      const VecX& h_r, const VecX& h_w, const ErgRates& rates,
                      double dt);

/// V = d^T P d and its rate under the step's update law, d = x_r - x_w
/// taken before the step.
ErgDiagnostics lyapunov(const VecX& x_r, const VecX& x_w, const ErgStepInfo& info,
                        const VecX& P_diag);

}  // namespace grfgov
