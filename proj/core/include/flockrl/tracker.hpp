#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <random>

#include "flockrl/critic.hpp"

namespace flockrl {

enum class Solver { PI, VI };

const char* solver_name(Solver solver);

// Learning knobs shared by the policy-iteration tracker and the
// value-iteration baseline.
struct PiConfig {
  int T_n = 400;
  double xi = 1e-4;
  int window = 10;
  double P0_scale = 100.0;
  Theta theta0 = psi_to_theta(Psi::Identity());
  double excitation_amplitude = 0.1;
  double excitation_decay = 0.999;
  // PI: steps between policy improvements.
  int improve_every = 10;
  // VI: steps between target-weight refreshes.
  int target_refresh = 20;
  // Restore P to P0_scale·I whenever the policy (PI) or target (VI) changes.
  bool reset_covariance_on_improve = true;
  // Install a new policy only if the whole Ψ is positive definite.
  bool require_positive_definite = true;
  // Stop learning once the weight window settles (Algorithm termination).
  bool stop_on_convergence = true;

  void validate() const;
};

struct TrackerRecord {
  int k = 0;
  Theta theta = Theta::Zero();
  Gain gain = Gain::Zero();  // installed policy after this step
  double utility = 0.0;
  double residual = 0.0;  // a-priori innovation target - φθ
  bool converged = false;
  bool improved = false;
};

// Model-free tracker for one axis of one agent. It only ever sees error
// windows and its own controls; the plant is never consulted.
class Tracker {
 public:
  Tracker(const PiConfig& cfg, const UtilityParams& params, std::uint64_t seed);
  virtual ~Tracker() = default;

  virtual Solver solver() const = 0;

  // Control for window Z: greedy action of the installed policy plus the
  // decaying dither while learning is active.
  double act(const ErrorWindow& Z);
  // Consumes the successor of the window passed to the last act(). When the
  // agent's realized input differs from the tracker's own command (other
  // control terms, saturation), pass it as `applied` so the transition is
  // credited to the action that actually drove the error window.
  TrackerRecord learn(const ErrorWindow& Z_next, std::optional<double> applied = std::nullopt);
  // One causal step: learn from the pending transition (if any), then act.
  double step(const ErrorWindow& Z);

  // Covariance back to P0, weights and policy retained, learning resumes.
  void restart();

  const Theta& theta() const { return rls_.theta; }
  const RlsState& rls() const { return rls_; }
  const Psi& policy() const { return policy_; }
  Gain gain() const { return policy_gain(policy_); }
  bool converged() const { return converged_; }
  bool learning() const { return learning_; }
  bool degenerate() const { return degenerate_; }
  int iteration() const { return k_; }
  std::optional<int> convergence_index() const { return convergence_index_; }
  int improvements() const { return improvements_; }
  int rejected_improvements() const { return rejected_; }
  const PiConfig& config() const { return cfg_; }

 protected:
  // Solver-specific regression and policy bookkeeping for one transition.
  virtual void update(const ErrorWindow& Z, double c, const ErrorWindow& Z_next,
                      TrackerRecord& record) = 0;
  // Called once when the weight window first settles; true if the policy changed.
  virtual bool on_convergence() { return false; }
  virtual void on_restart() {}

  // Greedy action of psi, or 0 when its control block is degenerate.
  double safe_greedy(const Psi& psi, const ErrorWindow& Z) const;
  bool admissible(const Psi& psi) const;
  // Installs theta as the acting policy if admissible; returns success.
  bool try_install(const Theta& theta);
  void reset_covariance();

  PiConfig cfg_;
  UtilityParams params_;
  RlsState rls_;
  Psi policy_;

 private:
  double dither();
  void check_convergence(TrackerRecord& record);

  std::mt19937_64 rng_;
  std::deque<Theta> history_;
  std::optional<ErrorWindow> pending_Z_;
  double pending_c_ = 0.0;
  int k_ = 0;
  bool converged_ = false;
  bool learning_ = true;
  bool degenerate_ = false;
  std::optional<int> convergence_index_;
  int improvements_ = 0;
  int rejected_ = 0;
};

}  // namespace flockrl
