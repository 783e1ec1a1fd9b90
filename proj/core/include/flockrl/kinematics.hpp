#pragma once

#include <Eigen/Core>

namespace flockrl {

using Vec2 = Eigen::Vector2d;

// Number of error samples kept per axis by the tracker.
constexpr int kWindowLength = 3;

// Most recent error first: [e_k, e_{k-1}, e_{k-2}].
using ErrorWindow = Eigen::Matrix<double, kWindowLength, 1>;

struct Limits {
  double v_max = 1.2;
  double a_max = 2.0;
};

struct AgentState {
  Vec2 position = Vec2::Zero();
  Vec2 velocity = Vec2::Zero();
  bool alive = true;
};

struct LeaderState {
  Vec2 position = Vec2::Zero();
  double heading = 0.0;
};

struct LeaderCommand {
  double linear_speed = 0.0;
  double angular_rate = 0.0;  // rad/s
  double duration = 0.0;      // s
};

constexpr double kPi = 3.14159265358979323846;
constexpr double kDegToRad = kPi / 180.0;

// Default cap on the leader's commanded turn rate (150 deg/s).
constexpr double kLeaderMaxAngularRate = 150.0 * kDegToRad;

// Wraps an angle into (-pi, pi].
double wrap_angle(double angle);

// Componentwise clamp of an acceleration command to ±a_max.
Vec2 saturate_accel(const Vec2& accel, double a_max);

// Norm clamp that preserves direction.
Vec2 clamp_norm(const Vec2& v, double max_norm);

// Semi-implicit Euler step of a planar double integrator:
// velocity is updated first, then position advances with the new velocity.
AgentState step_agent(const AgentState& state, const Vec2& control, double T, const Limits& limits);

// Unicycle update with the turn rate clamped to ±max_angular_rate.
LeaderState step_leader(const LeaderState& state, const LeaderCommand& cmd, double T,
                        double max_angular_rate = kLeaderMaxAngularRate);

ErrorWindow update_error_window(const ErrorWindow& Z, double new_error);

}  // namespace flockrl
