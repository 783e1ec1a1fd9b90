#include "flockrl/tracker.hpp"

#include <cmath>

#include "flockrl/errors.hpp"

namespace flockrl {

const char* solver_name(Solver solver) { return solver == Solver::PI ? "pi" : "vi"; }

void PiConfig::validate() const {
  if (T_n < 1) throw ParameterError("T_n must be at least 1");
  if (!(xi > 0.0)) throw ParameterError("convergence threshold xi must be positive");
  if (window < 1) throw ParameterError("convergence window must be at least 1");
  if (!(P0_scale > 0.0)) throw ParameterError("P0 scale must be positive");
  if (!theta0.allFinite()) throw ParameterError("theta0 must be finite");
  if (!(excitation_amplitude >= 0.0)) throw ParameterError("excitation amplitude must be non-negative");
  if (!(excitation_decay > 0.0 && excitation_decay <= 1.0)) throw ParameterError("excitation decay must lie in (0, 1]");
  if (improve_every < 1) throw ParameterError("improvement cadence must be at least 1");
  if (target_refresh < 1) throw ParameterError("target refresh period must be at least 1");
}

Tracker::Tracker(const PiConfig& cfg, const UtilityParams& params, std::uint64_t seed)
    : cfg_(cfg), params_(params), rng_(seed) {
  cfg_.validate();
  params_.validate();
  rls_ = make_rls(cfg_.theta0, cfg_.P0_scale);
  policy_ = theta_to_psi(cfg_.theta0);
  history_.push_back(rls_.theta);
}

double Tracker::dither() {
  if (!learning_ || cfg_.excitation_amplitude == 0.0) return 0.0;
  // 53 random bits mapped to [0, 1), then to [-1, 1).
  const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  return cfg_.excitation_amplitude * std::pow(cfg_.excitation_decay, k_) * (2.0 * u - 1.0);
}

double Tracker::safe_greedy(const Psi& psi, const ErrorWindow& Z) const {
  if (!has_invertible_control_block(psi)) return 0.0;
  return greedy_policy(psi, Z);
}

bool Tracker::admissible(const Psi& psi) const {
  return cfg_.require_positive_definite ? is_positive_definite(psi) : has_invertible_control_block(psi);
}

bool Tracker::try_install(const Theta& theta) {
  const Psi candidate = theta_to_psi(theta);
  if (!admissible(candidate)) {
    ++rejected_;
    return false;
  }
  policy_ = candidate;
  ++improvements_;
  return true;
}

void Tracker::reset_covariance() { rls_.P = cfg_.P0_scale * Covariance::Identity(); }

double Tracker::act(const ErrorWindow& Z) {
  degenerate_ = !has_invertible_control_block(policy_);
  const double c = safe_greedy(policy_, Z) + dither();
  pending_Z_ = Z;
  pending_c_ = c;
  return c;
}

TrackerRecord Tracker::learn(const ErrorWindow& Z_next, std::optional<double> applied) {
  TrackerRecord record;
  record.k = k_;
  if (!pending_Z_) throw InputError("learn() called without a preceding act()");
  const ErrorWindow Z = *pending_Z_;
  const double c = applied.value_or(pending_c_);
  pending_Z_.reset();
  record.utility = utility(Z, c, params_);
  if (learning_) {
    update(Z, c, Z_next, record);
    check_convergence(record);
    ++k_;
    if ((converged_ && cfg_.stop_on_convergence) || k_ >= cfg_.T_n) learning_ = false;
  }
  record.theta = rls_.theta;
  if (has_invertible_control_block(policy_)) record.gain = policy_gain(policy_);
  record.converged = converged_;
  return record;
}

double Tracker::step(const ErrorWindow& Z) {
  if (pending_Z_) learn(Z);
  return act(Z);
}

void Tracker::check_convergence(TrackerRecord& record) {
  history_.push_back(rls_.theta);
  while (static_cast<int>(history_.size()) > cfg_.window + 2) history_.pop_front();
  if (converged_ || static_cast<int>(history_.size()) < cfg_.window + 2) return;
  for (std::size_t n = 1; n < history_.size(); ++n) {
    if ((history_[n] - history_[n - 1]).norm() > cfg_.xi) return;
  }
  converged_ = true;
  convergence_index_ = k_;
  if (on_convergence()) record.improved = true;
}

void Tracker::restart() {
  reset_covariance();
  history_.clear();
  history_.push_back(rls_.theta);
  pending_Z_.reset();
  k_ = 0;
  converged_ = false;
  learning_ = true;
  convergence_index_.reset();
  on_restart();
}

}  // namespace flockrl
