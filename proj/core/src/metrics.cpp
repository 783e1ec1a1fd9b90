#include "flockrl/metrics.hpp"

#include <cmath>
#include <limits>

namespace flockrl {

namespace {

MeanStd mean_std(const std::vector<double>& xs) {
  MeanStd out;
  if (xs.empty()) return out;
  double sum = 0.0;
  for (double x : xs) sum += x;
  out.mean = sum / xs.size();
  double sq = 0.0;
  for (double x : xs) sq += (x - out.mean) * (x - out.mean);
  out.std = std::sqrt(sq / xs.size());
  return out;
}

}  // namespace

std::optional<MeanStd> tracking_error_metric(const std::vector<Vec2>& positions, int leader_index,
                                             const std::vector<bool>& alive, double d_t) {
  std::vector<double> gaps;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (static_cast<int>(i) == leader_index || !alive[i]) continue;
    gaps.push_back((positions[i] - positions[leader_index]).norm() - d_t);
  }
  if (gaps.empty()) return std::nullopt;
  return mean_std(gaps);
}

MeanStd separation_error_metric(const std::vector<Vec2>& positions, const GraphWeights& graph,
                                const std::vector<bool>& alive, int leader_index, double s) {
  std::vector<double> errs;
  const int n = static_cast<int>(positions.size());
  for (int i = 0; i < n; ++i) {
    if (i == leader_index || !alive[i]) continue;
    for (int j = i + 1; j < n; ++j) {
      if (j == leader_index || !alive[j] || !(graph(i, j) > 0.0)) continue;
      errs.push_back(std::abs((positions[i] - positions[j]).norm() - s));
    }
  }
  return mean_std(errs);
}

MeanStd speed_metric(const std::vector<Vec2>& velocities, const std::vector<bool>& alive, int leader_index) {
  std::vector<double> speeds;
  for (std::size_t i = 0; i < velocities.size(); ++i) {
    if (static_cast<int>(i) == leader_index || !alive[i]) continue;
    speeds.push_back(velocities[i].norm());
  }
  return mean_std(speeds);
}

double min_follower_distance(const std::vector<Vec2>& positions, const std::vector<bool>& alive,
                             int leader_index) {
  double best = std::numeric_limits<double>::infinity();
  const int n = static_cast<int>(positions.size());
  for (int i = 0; i < n; ++i) {
    if (i == leader_index || !alive[i]) continue;
    for (int j = i + 1; j < n; ++j) {
      if (j == leader_index || !alive[j]) continue;
      best = std::min(best, (positions[i] - positions[j]).norm());
    }
  }
  return best;
}

}  // namespace flockrl
