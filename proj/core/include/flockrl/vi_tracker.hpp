#pragma once

#include "flockrl/tracker.hpp"

namespace flockrl {

// Q-function value iteration baseline: fits x̄(Z_k, c_k)·θ to the one-step
// backup W + x̄(Z_{k+1}, c_{k+1})·θ_prev, with θ_prev refreshed on a fixed
// cadence and the acting policy taken greedily from θ at every step.
class ViTracker : public Tracker {
 public:
  ViTracker(const PiConfig& cfg, const UtilityParams& params, std::uint64_t seed);
  Solver solver() const override { return Solver::VI; }

  const Theta& target_theta() const { return target_; }
  // Overrides θ_prev until the next scheduled refresh.
  void set_target(const Theta& target) { target_ = target; }

 protected:
  void update(const ErrorWindow& Z, double c, const ErrorWindow& Z_next,
              TrackerRecord& record) override;
  void on_restart() override { since_refresh_ = 0; }

 private:
  Theta target_;
  int since_refresh_ = 0;
};

}  // namespace flockrl
