#include "flockrl/lq.hpp"

#include "flockrl/errors.hpp"
#include "flockrl/pi_tracker.hpp"
#include "flockrl/vi_tracker.hpp"

namespace flockrl {

ErrorModel double_integrator_error_model(double T) {
  if (!(T > 0.0)) throw ParameterError("step period must be positive");
  ErrorModel m;
  m.A << 2.0, -1.0, 0.0,
         1.0, 0.0, 0.0,
         0.0, 1.0, 0.0;
  m.B << T * T, 0.0, 0.0;
  return m;
}

LqTrackingPlant::LqTrackingPlant(double T, std::uint64_t seed, int episode_length, double init_range)
    : model_(double_integrator_error_model(T)), rng_(seed), episode_length_(episode_length),
      init_range_(init_range) {
  restart_episode();
}

void LqTrackingPlant::restart_episode() {
  for (int n = 0; n < kWindowLength; ++n) {
    const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    Z_(n) = init_range_ * (2.0 * u - 1.0);
  }
}

ErrorWindow LqTrackingPlant::observe() {
  if (episode_length_ > 0 && k_ > 0 && k_ % episode_length_ == 0) restart_episode();
  return Z_;
}

ErrorWindow LqTrackingPlant::apply(double c) {
  Z_ = model_.A * Z_ + model_.B * c;
  ++k_;
  return Z_;
}

QIterationResult nominal_q_matrix(const ErrorModel& model, const UtilityParams& params, double tolerance,
                                  int max_iterations) {
  params.validate();
  Eigen::Matrix<double, 3, 4> M;
  M << model.A, model.B;
  Psi Wm = Psi::Zero();
  Wm.topLeftCorner<3, 3>() = params.J;
  Wm(3, 3) = params.K;

  QIterationResult out;
  out.H = Wm;
  for (out.iterations = 1; out.iterations <= max_iterations; ++out.iterations) {
    const Eigen::Matrix3d S = out.H.topLeftCorner<3, 3>() -
                              out.H.block<3, 1>(0, 3) * out.H.block<1, 3>(3, 0) / out.H(3, 3);
    Psi next = Wm + M.transpose() * S * M;
    next = 0.5 * (next + next.transpose()).eval();
    out.residual = (next - out.H).cwiseAbs().maxCoeff();
    out.H = next;
    if (out.residual < tolerance) return out;
  }
  throw Error("Q-value iteration did not reach the requested tolerance");
}

LearningRun run_learning(ErrorPlant& plant, Tracker& tracker, int max_steps) {
  LearningRun run;
  for (int k = 0; k < max_steps && tracker.learning(); ++k) {
    const ErrorWindow Z = plant.observe();
    const double c = tracker.act(Z);
    run.windows.push_back(Z);
    run.controls.push_back(c);
    run.log.push_back(tracker.learn(plant.apply(c)));
  }
  run.psi = tracker.policy();
  run.converged = tracker.converged();
  run.iterations = tracker.iteration();
  run.convergence_index = tracker.convergence_index();
  return run;
}

LearningRun run_algorithm1(ErrorPlant& plant, const UtilityParams& params, const PiConfig& cfg,
                           std::uint64_t seed) {
  PiTracker tracker(cfg, params, seed);
  return run_learning(plant, tracker, cfg.T_n);
}

std::unique_ptr<Tracker> make_tracker(Solver solver, const PiConfig& cfg, const UtilityParams& params,
                                      std::uint64_t seed) {
  if (solver == Solver::PI) return std::make_unique<PiTracker>(cfg, params, seed);
  return std::make_unique<ViTracker>(cfg, params, seed);
}

}  // namespace flockrl
