#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "flockrl/connectivity.hpp"
#include "flockrl/kinematics.hpp"

namespace flockrl {

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

// Mean follower distance to the leader minus d_t, with its spread.
// Empty when no follower is alive.
std::optional<MeanStd> tracking_error_metric(const std::vector<Vec2>& positions, int leader_index,
                                             const std::vector<bool>& alive, double d_t);

// Mean | ‖g_i - g_j‖ - s | over connected alive follower pairs (0 if none).
MeanStd separation_error_metric(const std::vector<Vec2>& positions, const GraphWeights& graph,
                                const std::vector<bool>& alive, int leader_index, double s);

// Mean and population standard deviation of alive follower speeds.
MeanStd speed_metric(const std::vector<Vec2>& velocities, const std::vector<bool>& alive,
                     int leader_index);

// Smallest distance between two alive followers (infinity with fewer than 2).
double min_follower_distance(const std::vector<Vec2>& positions, const std::vector<bool>& alive,
                             int leader_index);

}  // namespace flockrl
