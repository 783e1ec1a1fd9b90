#include "flockrl/kinematics.hpp"

#include <algorithm>
#include <cmath>

#include "flockrl/errors.hpp"

namespace flockrl {

double wrap_angle(double angle) {
  double wrapped = std::remainder(angle, 2.0 * kPi);
  if (wrapped <= -kPi) wrapped += 2.0 * kPi;
  return wrapped;
}

Vec2 saturate_accel(const Vec2& accel, double a_max) {
  return accel.cwiseMax(-a_max).cwiseMin(a_max);
}

Vec2 clamp_norm(const Vec2& v, double max_norm) {
  const double n = v.norm();
  if (n <= max_norm) return v;
  Vec2 out = v * (max_norm / n);
  // Rounding in the rescale can leave the norm an ulp above the cap.
  while (out.norm() > max_norm) out *= 1.0 - 0x1.0p-52;
  return out;
}

AgentState step_agent(const AgentState& state, const Vec2& control, double T, const Limits& limits) {
  if (!(T > 0.0)) throw ParameterError("step period must be positive");
  if (!state.position.allFinite() || !state.velocity.allFinite() || !control.allFinite()) {
    throw InvalidStateError("non-finite agent state or control");
  }
  AgentState next = state;
  next.velocity = clamp_norm(state.velocity + T * saturate_accel(control, limits.a_max), limits.v_max);
  next.position = state.position + T * next.velocity;
  return next;
}

LeaderState step_leader(const LeaderState& state, const LeaderCommand& cmd, double T,
                        double max_angular_rate) {
  if (!(T > 0.0)) throw ParameterError("step period must be positive");
  if (!state.position.allFinite() || !std::isfinite(state.heading) ||
      !std::isfinite(cmd.linear_speed) || !std::isfinite(cmd.angular_rate)) {
    throw InvalidStateError("non-finite leader state or command");
  }
  const double omega = std::clamp(cmd.angular_rate, -max_angular_rate, max_angular_rate);
  LeaderState next;
  next.heading = wrap_angle(state.heading + T * omega);
  next.position = state.position + T * cmd.linear_speed * Vec2(std::cos(next.heading), std::sin(next.heading));
  return next;
}

ErrorWindow update_error_window(const ErrorWindow& Z, double new_error) {
  ErrorWindow next;
  next(0) = new_error;
  next.tail<kWindowLength - 1>() = Z.head<kWindowLength - 1>();
  return next;
}

}  // namespace flockrl
