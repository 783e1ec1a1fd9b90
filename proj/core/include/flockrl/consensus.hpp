#pragma once

#include <vector>

#include "flockrl/kinematics.hpp"

namespace flockrl {

// c_v = -Σ_j s_ij (v_i - v_j) for one axis.
double consensus_control(double own_velocity, const std::vector<double>& neighbor_velocities,
                         const std::vector<double>& neighbor_weights);

// Both axes at once.
Vec2 consensus_control(const Vec2& own_velocity, const std::vector<Vec2>& neighbor_velocities,
                       const std::vector<double>& neighbor_weights);

}  // namespace flockrl
