#pragma once

#include <Eigen/Core>

#include "flockrl/kinematics.hpp"

namespace flockrl {

constexpr int kThetaSize = 10;

using Theta = Eigen::Matrix<double, kThetaSize, 1>;
using Psi = Eigen::Matrix4d;
using Gain = Eigen::RowVector3d;
using Covariance = Eigen::Matrix<double, kThetaSize, kThetaSize>;

// Floor on Ψ_cc (and on the spectrum of Ψ when positivity is enforced).
constexpr double kPositivityFloor = 1e-8;

struct UtilityParams {
  Eigen::Matrix3d J = 1e-4 * Eigen::Matrix3d::Identity();
  double K = 0.01;

  void validate() const;
};

struct RlsState {
  Theta theta = Theta::Zero();
  Covariance P = Covariance::Identity();
  Theta L = Theta::Zero();
};

double utility(const ErrorWindow& Z, double c, const UtilityParams& params);

// Quadratic basis x̄ such that x̄(z)·θ(Ψ) = ½ zᵀΨz with z = (Z, c).
Theta feature_map(const ErrorWindow& Z, double c);

Psi theta_to_psi(const Theta& theta);
Theta psi_to_theta(const Psi& psi);

RlsState make_rls(const Theta& theta0, double P0_scale);
RlsState rls_update(const RlsState& state, const Theta& phi, double target);

// c = -Ψ_cc⁻¹ Ψ_cZ Z. Throws DegenerateCriticError when Ψ_cc ≤ floor.
double greedy_policy(const Psi& psi, const ErrorWindow& Z);
// Feedback row K with c = -K Z.
Gain policy_gain(const Psi& psi);

// Ψ symmetric with every eigenvalue above the floor.
bool is_positive_definite(const Psi& psi, double floor = kPositivityFloor);
// Ψ_cc above the floor, enough to extract a policy.
bool has_invertible_control_block(const Psi& psi, double floor = kPositivityFloor);

}  // namespace flockrl
