#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "flockrl/critic.hpp"
#include "flockrl/tracker.hpp"

namespace flockrl {

// Source of error windows for a single tracking axis.
class ErrorPlant {
 public:
  virtual ~ErrorPlant() = default;
  // Window the controller acts on at the current step.
  virtual ErrorWindow observe() = 0;
  // Applies the control and returns the successor window.
  virtual ErrorWindow apply(double c) = 0;
};

// Error-window dynamics of a double integrator chasing a constant-velocity
// target under semi-implicit Euler: Z' = A Z + B c.
struct ErrorModel {
  Eigen::Matrix3d A;
  Eigen::Vector3d B;
};

ErrorModel double_integrator_error_model(double T);

// Linear plant with optional episodic restarts of the window from
// U(-init_range, init_range)³.
class LqTrackingPlant : public ErrorPlant {
 public:
  LqTrackingPlant(double T, std::uint64_t seed, int episode_length = 0, double init_range = 1.0);
  ErrorWindow observe() override;
  ErrorWindow apply(double c) override;
  const ErrorModel& model() const { return model_; }

 private:
  void restart_episode();

  ErrorModel model_;
  std::mt19937_64 rng_;
  int episode_length_;
  double init_range_;
  ErrorWindow Z_;
  long k_ = 0;
};

// Fixed point of Q-value iteration H ← Wm + Mᵀ(H_ZZ − H_Zc H_cc⁻¹ H_cZ)M for a
// known error model; used to warm-start critics from a nominal model.
struct QIterationResult {
  Psi H;
  int iterations = 0;
  double residual = 0.0;
};

QIterationResult nominal_q_matrix(const ErrorModel& model, const UtilityParams& params,
                                  double tolerance = 1e-12, int max_iterations = 200000);

struct LearningRun {
  Psi psi;
  bool converged = false;
  int iterations = 0;
  std::optional<int> convergence_index;
  std::vector<TrackerRecord> log;
  std::vector<ErrorWindow> windows;  // window acted on at each step
  std::vector<double> controls;
};

// Drives a tracker against a plant until it stops learning or max_steps.
LearningRun run_learning(ErrorPlant& plant, Tracker& tracker, int max_steps);

// Online policy iteration until convergence or T_n steps.
LearningRun run_algorithm1(ErrorPlant& plant, const UtilityParams& params, const PiConfig& cfg,
                           std::uint64_t seed);

std::unique_ptr<Tracker> make_tracker(Solver solver, const PiConfig& cfg,
                                      const UtilityParams& params, std::uint64_t seed);

}  // namespace flockrl
