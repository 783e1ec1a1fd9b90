#pragma once

#include <array>
#include <memory>
#include <optional>
#include <vector>

#include "flockrl/connectivity.hpp"
#include "flockrl/kinematics.hpp"
#include "flockrl/lq.hpp"
#include "flockrl/metrics.hpp"
#include "flockrl/scenario.hpp"
#include "flockrl/separation.hpp"
#include "flockrl/tracker.hpp"

namespace flockrl {

struct ControlParts {
  Vec2 tracking = Vec2::Zero();
  Vec2 consensus = Vec2::Zero();
  Vec2 separation = Vec2::Zero();
};

struct StepRecord {
  int step = 0;
  double time = 0.0;  // end of the step
  std::vector<AgentState> agents;
  double leader_heading = 0.0;
  std::vector<ControlParts> controls;
  int graph_edges = 0;        // undirected edges with s_ij > 0
  double graph_mean_weight = 0.0;
};

struct MetricsRow {
  int step = 0;
  double time = 0.0;
  std::optional<MeanStd> tracking;
  MeanStd separation;
  MeanStd speed;
  double min_distance = 0.0;
  double safety_distance = 0.0;
  int alive_followers = 0;
};

// Critic snapshot for one follower axis.
struct WeightsRow {
  int step = 0;
  int agent = 0;
  int axis = 0;
  Theta theta = Theta::Zero();
  Gain gain = Gain::Zero();  // feedback row of the installed policy
  double utility = 0.0;
  double residual = 0.0;
  bool converged = false;
  bool learning = false;
};

struct RunResult {
  std::vector<StepRecord> trajectory;
  std::vector<MetricsRow> metrics;
  std::vector<WeightsRow> weights;
};

// Mutable world state; exposed so events and steps can be unit tested.
struct World {
  double time = 0.0;
  int step = 0;
  std::vector<AgentState> agents;
  LeaderState leader;
  double s = 2.0;
  std::vector<FuzzyRuleBase> rules;  // per agent
  // Error windows and trackers per follower and axis, indexed [agent][axis].
  std::vector<std::array<ErrorWindow, 2>> windows;
  std::vector<std::array<std::unique_ptr<Tracker>, 2>> trackers;
  std::vector<bool> fired;  // per scenario event
};

World make_world(const Scenario& scenario);
void apply_event(World& world, const Scenario& scenario, const Event& event);

// Fixed-step synchronous simulation of a flock scenario.
RunResult run(const Scenario& scenario);

// Single-axis learning run of an lq scenario. PI is bounded by T_n, VI by
// the scenario's vi_budget.
LearningRun run_lq(const Scenario& scenario, Solver solver);

}  // namespace flockrl
