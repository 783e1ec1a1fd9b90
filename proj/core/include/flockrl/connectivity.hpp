#pragma once

#include <vector>

#include <Eigen/Core>

#include "flockrl/kinematics.hpp"

namespace flockrl {

struct ConnectivityParams {
  double a = 1.0;    // inner plateau radius [m]
  double r = 3.5;    // communication range [m]
  double mu = 0.5;   // alpha-norm curvature

  void validate() const;
  // Inner plateau threshold on the normalized alpha-norm scale, in (0, 1).
  double plateau() const;
  // Alpha-norm of the range r, used to normalize distances.
  double range_alpha() const;
};

double alpha_norm(const Vec2& v, double mu);
double alpha_norm(double length, double mu);

// Bump function: 1 on [0, h), cosine roll-off on [h, 1), 0 from 1 on.
double pump(double z, double h);

double edge_weight(const Vec2& pos_i, const Vec2& pos_j, const ConnectivityParams& params);

using GraphWeights = Eigen::MatrixXd;

GraphWeights build_graph(const std::vector<Vec2>& positions, const std::vector<bool>& alive,
                         const ConnectivityParams& params);

// Alive j != i with s_ij > 0.
std::vector<int> neighbors(const GraphWeights& graph, const std::vector<bool>& alive, int i);

}  // namespace flockrl
