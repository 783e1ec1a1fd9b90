#include "flockrl/connectivity.hpp"

#include <cmath>

#include "flockrl/errors.hpp"

namespace flockrl {

void ConnectivityParams::validate() const {
  if (!(mu > 0.0)) throw ParameterError("alpha-norm mu must be positive");
  if (!(a > 0.0 && a < r)) throw ParameterError("connectivity requires 0 < a < r");
}

double ConnectivityParams::plateau() const { return alpha_norm(a, mu) / alpha_norm(r, mu); }

double ConnectivityParams::range_alpha() const { return alpha_norm(r, mu); }

double alpha_norm(double length, double mu) {
  if (!(mu > 0.0)) throw ParameterError("alpha-norm mu must be positive");
  return (std::sqrt(1.0 + mu * length * length) - 1.0) / mu;
}

double alpha_norm(const Vec2& v, double mu) { return alpha_norm(v.norm(), mu); }

double pump(double z, double h) {
  if (!(h > 0.0 && h < 1.0)) throw ParameterError("pump threshold must lie in (0, 1)");
  if (z < h) return 1.0;
  if (z < 1.0) return 0.5 * (1.0 + std::cos(kPi * (z - h) / (1.0 - h)));
  return 0.0;
}

double edge_weight(const Vec2& pos_i, const Vec2& pos_j, const ConnectivityParams& params) {
  params.validate();
  return pump(alpha_norm(pos_i - pos_j, params.mu) / params.range_alpha(), params.plateau());
}

GraphWeights build_graph(const std::vector<Vec2>& positions, const std::vector<bool>& alive,
                         const ConnectivityParams& params) {
  params.validate();
  const int n = static_cast<int>(positions.size());
  if (static_cast<int>(alive.size()) != n) throw InputError("positions and alive flags differ in length");
  const double h = params.plateau();
  const double norm = params.range_alpha();
  GraphWeights w = GraphWeights::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (!alive[i]) continue;
    for (int j = i + 1; j < n; ++j) {
      if (!alive[j]) continue;
      const double s = pump(alpha_norm(positions[i] - positions[j], params.mu) / norm, h);
      w(i, j) = s;
      w(j, i) = s;
    }
  }
  return w;
}

std::vector<int> neighbors(const GraphWeights& graph, const std::vector<bool>& alive, int i) {
  std::vector<int> out;
  for (int j = 0; j < graph.cols(); ++j) {
    if (j != i && alive[j] && graph(i, j) > 0.0) out.push_back(j);
  }
  return out;
}

}  // namespace flockrl
