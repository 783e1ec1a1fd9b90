#include "flockrl/consensus.hpp"

#include "flockrl/errors.hpp"

namespace flockrl {

double consensus_control(double own_velocity, const std::vector<double>& neighbor_velocities,
                         const std::vector<double>& neighbor_weights) {
  if (neighbor_velocities.size() != neighbor_weights.size()) {
    throw InputError("neighbour velocities and weights differ in length");
  }
  double c = 0.0;
  for (std::size_t j = 0; j < neighbor_velocities.size(); ++j) {
    c -= neighbor_weights[j] * (own_velocity - neighbor_velocities[j]);
  }
  return c;
}

Vec2 consensus_control(const Vec2& own_velocity, const std::vector<Vec2>& neighbor_velocities,
                       const std::vector<double>& neighbor_weights) {
  if (neighbor_velocities.size() != neighbor_weights.size()) {
    throw InputError("neighbour velocities and weights differ in length");
  }
  Vec2 c = Vec2::Zero();
  for (std::size_t j = 0; j < neighbor_velocities.size(); ++j) {
    c -= neighbor_weights[j] * (own_velocity - neighbor_velocities[j]);
  }
  return c;
}

}  // namespace flockrl
