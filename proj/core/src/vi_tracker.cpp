#include "flockrl/vi_tracker.hpp"

namespace flockrl {

ViTracker::ViTracker(const PiConfig& cfg, const UtilityParams& params, std::uint64_t seed)
    : Tracker(cfg, params, seed), target_(cfg.theta0) {}

void ViTracker::update(const ErrorWindow& Z, double c, const ErrorWindow& Z_next, TrackerRecord& record) {
  const Psi target_psi = theta_to_psi(target_);
  const double c_next = safe_greedy(admissible(target_psi) ? target_psi : policy_, Z_next);
  const Theta phi = feature_map(Z, c);
  const double backup = record.utility + feature_map(Z_next, c_next).dot(target_);
  record.residual = backup - phi.dot(rls_.theta);
  rls_ = rls_update(rls_, phi, backup);

  const Psi current = theta_to_psi(rls_.theta);
  if (admissible(current)) policy_ = current;

  if (++since_refresh_ >= cfg_.target_refresh) {
    since_refresh_ = 0;
    target_ = rls_.theta;
    record.improved = true;
    if (cfg_.reset_covariance_on_improve) reset_covariance();
  }
}

}  // namespace flockrl
