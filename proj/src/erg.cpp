#include "grfgov/erg.hpp"

#include <stdexcept>

namespace grfgov {

void ErgRates::validate() const {
  if (!(alpha_r > 0.0 && alpha_t > 0.0 && alpha_n > 0.0)) {
    throw std::invalid_argument("ERG rates must be positive");
  }
}

std::string_view branchName(Branch b) {
  switch (b) {
    case Branch::kDirect:
      return "direct";
    case Branch::kTangential:
      return "tangential";
    case Branch::kNormalPush:
      return "normal-push";
    case Branch::kNormalPull:
      return "normal-pull";
    case Branch::kIdle:
      return "idle";
  }
  return "idle";
}

Branch branchFromName(std::string_view name) {
  for (Branch b : {Branch::kDirect, Branch::kTangential, Branch::kNormalPush,
                   Branch::kNormalPull, Branch::kIdle}) {
    if (branchName(b) == name) return b;
  }
  throw std::invalid_argument("unknown branch tag: " + std::string(name));
}

MatX nullspaceBasis(const MatX& C) {
  const int n = static_cast<int>(C.cols());
  if (C.rows() == 0) return MatX::Identity(n, n);
  Eigen::JacobiSVD<MatX> svd(C, Eigen::ComputeFullV);
  const VecX& s = svd.singularValues();
  const double tol = 1e-9 * (s.size() > 0 ? s(0) : 0.0);
  int rank = 0;
  for (int i = 0; i < s.size(); ++i) {
    if (s(i) > tol) ++rank;
  }
  return svd.matrixV().rightCols(n - rank);
}

ErgStepResult ergStep(const GovernorState& gov, const ConstraintLinearization& lin,
                      const VecX& h_r, const VecX& h_w, const ErgRates& rates,
                      double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("ergStep: dt must be positive");
  const int n_x = static_cast<int>(gov.x_w.size());
  if (gov.x_r.size() != n_x || lin.J_r.cols() != n_x) {
    throw std::invalid_argument("ergStep: reference dimensions disagree");
  }
  if (h_r.size() != lin.J_r.rows() || h_w.size() != lin.J_r.rows()) {
    throw std::invalid_argument("ergStep: constraint dimensions disagree");
  }

  const VecX d = gov.x_r - gov.x_w;
  const double min_hw = h_w.minCoeff();
  const double min_hr = h_r.minCoeff();

  ErgStepInfo info;
  info.v_r = VecX::Zero(n_x);
  info.v_t = VecX::Zero(n_x);
  info.v_n = VecX::Zero(n_x);
  info.N = MatX(n_x, 0);
  info.C_r = MatX(0, n_x);

  if (min_hw >= 0.0 || min_hr >= 0.0) {
    info.alpha_r_hat = rates.alpha_r;
    info.v_r = rates.alpha_r * d;
    info.branch = Branch::kDirect;
  }

  if (min_hw >= 0.0 && min_hr < 0.0) {
    int violated = 0;
    for (int k = 0; k < h_r.size(); ++k) {
      if (h_r(k) < 0.0) ++violated;
    }
    info.C_r.resize(violated, n_x);
    for (int k = 0, row = 0; k < h_r.size(); ++k) {
      if (h_r(k) < 0.0) info.C_r.row(row++) = lin.J_r.row(k);
    }
    info.N = nullspaceBasis(info.C_r);
    for (int k = 0; k < info.N.cols(); ++k) {
      info.N.col(k).normalize();
      const auto n_k = info.N.col(k);
      info.v_t += rates.alpha_t * n_k * n_k.dot(d);
    }
    info.alpha_t_hat = rates.alpha_t;
    info.branch = Branch::kTangential;
  }

  if (min_hw < 0.0 && min_hr < 0.0) {
    Eigen::Index k_min = 0;
    h_w.minCoeff(&k_min);
    info.k_min = static_cast<int>(k_min);
    const VecX row = lin.J_r.row(k_min).transpose();
    const double norm = row.norm();
    if (norm < 1e-12) {
      throw SimulationError("ergStep: constraint row " + std::to_string(k_min) +
                            " has a zero gradient");
    }
    info.r_k = row / norm;
    const bool push = h_r(k_min) >= h_w(k_min);
    info.alpha_n_hat = push ? rates.alpha_n : -rates.alpha_n;
    info.v_n = info.alpha_n_hat * info.r_k * info.r_k.dot(d);
    info.branch = push ? Branch::kNormalPush : Branch::kNormalPull;
  }

  info.x_w_dot = info.v_r + info.v_t + info.v_n;

  ErgStepResult out;
  out.next = gov;
  out.next.x_w = gov.x_w + dt * info.x_w_dot;
  out.next.h_r = h_r;
  out.next.h_w = h_w;
  out.next.last_branch = info.branch;
  out.info = std::move(info);
  return out;
}

ErgDiagnostics lyapunov(const VecX& x_r, const VecX& x_w, const ErgStepInfo& info,
                        const VecX& P_diag) {
  const int n = static_cast<int>(x_r.size());
  if (P_diag.size() != n || (P_diag.array() <= 0.0).any()) {
    throw std::invalid_argument("lyapunov: P must be diagonal and strictly positive");
  }
  const VecX d = x_r - x_w;
  MatX rate = info.alpha_r_hat * MatX::Identity(n, n);
  for (int k = 0; k < info.N.cols(); ++k) {
    rate += info.alpha_t_hat * info.N.col(k) * info.N.col(k).transpose();
  }
  if (info.r_k.size() == n) {
    rate += info.alpha_n_hat * info.r_k * info.r_k.transpose();
  }

  ErgDiagnostics out;
  out.Q = P_diag.asDiagonal() * rate;
  out.V = d.dot(P_diag.asDiagonal() * d);
  out.V_dot = -2.0 * d.dot(out.Q * d);
  return out;
}

}  // namespace grfgov
