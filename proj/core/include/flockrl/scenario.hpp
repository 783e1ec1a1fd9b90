#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flockrl/connectivity.hpp"
#include "flockrl/critic.hpp"
#include "flockrl/kinematics.hpp"
#include "flockrl/separation.hpp"
#include "flockrl/tracker.hpp"

namespace flockrl {

constexpr int kSchemaVersion = 1;

enum class ScenarioKind { Flock, Lq };

struct Event {
  enum class Type { Decommission, SetSafetyDistance };
  double time = 0.0;
  Type type = Type::Decommission;
  std::vector<int> agents;  // decommission targets
  double value = 0.0;       // new safety distance
};

// Uniform box, centred on the leader's start plus offset.
struct Scatter {
  double width = 10.0;
  double height = 10.0;
  Vec2 offset = Vec2::Zero();
};

enum class Theta0Mode { Identity, Nominal, Explicit };

// One fuzzy rule with geometry in multiples of the safety distance.
struct RuleSpec {
  MembershipShape shape = MembershipShape::Triangle;
  double center = 0.0;
  double width = 0.5;
  double consequence = 0.0;  // [m/s²]
};

struct SeparationConfig {
  // Explicit rule base; empty selects the default five-anchor base with eta0.
  std::vector<RuleSpec> rules;
  double eta0 = 2.0;
  bool normalized = false;
  bool adaptive = false;
  double learning_rate = 0.1;
  double consequence_bound = 3.0;
};

// Single-axis learning benchmark on the double-integrator error model.
struct LqConfig {
  int episode_length = 20;
  double init_range = 1.0;
  // Iteration budget of the value-iteration baseline (T_n bounds the PI run).
  int vi_budget = 6000;
};

struct Scenario {
  int schema_version = kSchemaVersion;
  std::string name = "flock";
  ScenarioKind kind = ScenarioKind::Flock;

  int M = 10;
  int leader_index = 0;
  std::vector<AgentState> initial_states;  // empty: seeded scatter
  Scatter scatter;
  LeaderState leader_start;

  double T = 0.05;
  double duration = 65.0;
  std::vector<LeaderCommand> leader_schedule;
  std::vector<Event> events;

  double d_t = 2.0;
  // Keep d_t equal to the live safety distance.
  bool d_t_tracks_s = true;
  double s = 2.0;
  Limits limits;
  ConnectivityParams connectivity;
  UtilityParams utility;
  PiConfig pi_config;
  Theta0Mode theta0_mode = Theta0Mode::Identity;
  SeparationConfig separation;
  // Baseline option: consensus over a complete graph with unit weights.
  bool vi_fully_connected = false;

  Solver solver = Solver::PI;
  std::uint64_t seed = 1;

  LqConfig lq;

  int steps() const;
  // d_t in force for safety distance s_now.
  double proximity(double s_now) const { return d_t_tracks_s ? s_now : d_t; }
  // Sorted interior boundaries: schedule switches and event times.
  std::vector<double> stage_boundaries() const;
  // Schedule entry active at time t (the last one once the schedule runs out).
  LeaderCommand leader_command_at(double t) const;
  // Critic initial weights after resolving theta0_mode.
  Theta resolve_theta0() const;
  // Per-agent separation rule base at the initial safety distance.
  FuzzyRuleBase rule_base() const;

  // Throws ConfigError on any violated invariant.
  void validate() const;
};

// Ten robots, Table-I leader schedule, four followers lost at 20 s,
// safety distance raised from 2 m to 2.5 m at 45 s.
Scenario default_flock_scenario();

// Double-integrator learning benchmark used to compare PI against VI.
Scenario default_lq_scenario();

const char* kind_name(ScenarioKind kind);
const char* theta0_mode_name(Theta0Mode mode);

}  // namespace flockrl
