#include "flockrl/pi_tracker.hpp"

namespace flockrl {

void PiTracker::update(const ErrorWindow& Z, double c, const ErrorWindow& Z_next, TrackerRecord& record) {
  // The successor action comes from the policy under evaluation, undithered.
  const double c_next = safe_greedy(policy_, Z_next);
  const Theta phi = feature_map(Z, c) - feature_map(Z_next, c_next);
  record.residual = record.utility - phi.dot(rls_.theta);
  rls_ = rls_update(rls_, phi, record.utility);

  if (++since_improve_ >= cfg_.improve_every) {
    since_improve_ = 0;
    record.improved = try_install(rls_.theta);
    if (cfg_.reset_covariance_on_improve) reset_covariance();
  }
}

bool PiTracker::on_convergence() {
  since_improve_ = 0;
  return try_install(rls_.theta);
}

}  // namespace flockrl
