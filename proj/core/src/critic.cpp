#include "flockrl/critic.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "flockrl/errors.hpp"

namespace flockrl {

namespace {

// Upper-triangle (row, col) pairs in θ order.
constexpr int kRows[kThetaSize] = {0, 0, 0, 0, 1, 1, 1, 2, 2, 3};
constexpr int kCols[kThetaSize] = {0, 1, 2, 3, 1, 2, 3, 2, 3, 3};

}  // namespace

void UtilityParams::validate() const {
  if (!J.allFinite() || !(K > 0.0)) throw ParameterError("utility requires finite J and K > 0");
  if ((J - J.transpose()).cwiseAbs().maxCoeff() > 1e-12) throw ParameterError("J must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(J, Eigen::EigenvaluesOnly);
  if (!(eig.eigenvalues().minCoeff() > 0.0)) throw ParameterError("J must be positive definite");
}

double utility(const ErrorWindow& Z, double c, const UtilityParams& params) {
  return 0.5 * (Z.dot(params.J * Z) + params.K * c * c);
}

Theta feature_map(const ErrorWindow& Z, double c) {
  const Eigen::Vector4d z(Z(0), Z(1), Z(2), c);
  Theta x;
  for (int n = 0; n < kThetaSize; ++n) {
    const double p = z(kRows[n]) * z(kCols[n]);
    x(n) = kRows[n] == kCols[n] ? 0.5 * p : p;
  }
  return x;
}

Psi theta_to_psi(const Theta& theta) {
  Psi psi;
  for (int n = 0; n < kThetaSize; ++n) {
    psi(kRows[n], kCols[n]) = theta(n);
    psi(kCols[n], kRows[n]) = theta(n);
  }
  return psi;
}

Theta psi_to_theta(const Psi& psi) {
  Theta theta;
  for (int n = 0; n < kThetaSize; ++n) theta(n) = psi(kRows[n], kCols[n]);
  return theta;
}

RlsState make_rls(const Theta& theta0, double P0_scale) {
  if (!(P0_scale > 0.0)) throw ParameterError("P0 scale must be positive");
  RlsState state;
  state.theta = theta0;
  state.P = P0_scale * Covariance::Identity();
  state.L.setZero();
  return state;
}

RlsState rls_update(const RlsState& state, const Theta& phi, double target) {
  if (!phi.allFinite() || !std::isfinite(target)) throw EstimationError("non-finite regressor or target");
  RlsState next;
  const Theta Pphi = state.P * phi;
  next.L = Pphi / (1.0 + phi.dot(Pphi));
  next.theta = state.theta + next.L * (target - phi.dot(state.theta));
  next.P = state.P - next.L * Pphi.transpose();
  next.P = 0.5 * (next.P + next.P.transpose()).eval();
  return next;
}

double greedy_policy(const Psi& psi, const ErrorWindow& Z) {
  if (!has_invertible_control_block(psi)) throw DegenerateCriticError("control block of the critic is not positive");
  return -psi.block<1, 3>(3, 0).dot(Z) / psi(3, 3);
}

Gain policy_gain(const Psi& psi) {
  if (!has_invertible_control_block(psi)) throw DegenerateCriticError("control block of the critic is not positive");
  return psi.block<1, 3>(3, 0) / psi(3, 3);
}

bool is_positive_definite(const Psi& psi, double floor) {
  if (!psi.allFinite()) return false;
  Eigen::SelfAdjointEigenSolver<Psi> eig(psi, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff() > floor;
}

bool has_invertible_control_block(const Psi& psi, double floor) {
  return std::isfinite(psi(3, 3)) && psi(3, 3) > floor && psi.block<1, 3>(3, 0).allFinite();
}

}  // namespace flockrl
