#pragma once

#include "flockrl/tracker.hpp"

namespace flockrl {

// Online policy iteration: RLS on the temporal-difference regressor
// φ = x̄(Z_k, c_k) − x̄(Z_{k+1}, c_{k+1}) with target W(Z_k, c_k), and greedy
// improvement on a fixed cadence and at window convergence.
class PiTracker : public Tracker {
 public:
  using Tracker::Tracker;
  Solver solver() const override { return Solver::PI; }

 protected:
  void update(const ErrorWindow& Z, double c, const ErrorWindow& Z_next,
              TrackerRecord& record) override;
  bool on_convergence() override;
  void on_restart() override { since_improve_ = 0; }

 private:
  int since_improve_ = 0;
};

}  // namespace flockrl
