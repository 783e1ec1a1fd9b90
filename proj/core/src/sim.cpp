#include "flockrl/sim.hpp"

#include <cmath>
#include <random>

#include "flockrl/consensus.hpp"
#include "flockrl/errors.hpp"
#include "flockrl/lq.hpp"

namespace flockrl {

namespace {

constexpr double kTimeEps = 1e-9;

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::vector<Vec2> positions_of(const World& w) {
  std::vector<Vec2> out;
  out.reserve(w.agents.size());
  for (const auto& a : w.agents) out.push_back(a.position);
  return out;
}

std::vector<bool> alive_of(const World& w) {
  std::vector<bool> out;
  out.reserve(w.agents.size());
  for (const auto& a : w.agents) out.push_back(a.alive);
  return out;
}

Vec2 tracking_error(const World& w, int i, int leader) {
  return w.agents[i].position - w.agents[leader].position;
}

}  // namespace

World make_world(const Scenario& scenario) {
  scenario.validate();
  if (scenario.kind != ScenarioKind::Flock) throw ConfigError("not a flock scenario");
  World w;
  w.s = scenario.s;
  w.leader = scenario.leader_start;
  const int M = scenario.M;
  const int tau = scenario.leader_index;
  if (!scenario.initial_states.empty()) {
    w.agents = scenario.initial_states;
  } else {
    std::mt19937_64 rng(mix_seed(scenario.seed, 0));
    w.agents.resize(M);
    for (int i = 0; i < M; ++i) {
      if (i == tau) continue;
      const Vec2 u(unit(rng) - 0.5, unit(rng) - 0.5);
      w.agents[i].position = scenario.leader_start.position + scenario.scatter.offset +
                             Vec2(u.x() * scenario.scatter.width, u.y() * scenario.scatter.height);
    }
  }
  for (auto& a : w.agents) a.alive = true;
  w.agents[tau].position = scenario.leader_start.position;
  w.agents[tau].velocity = Vec2::Zero();

  w.rules.assign(M, scenario.rule_base());

  PiConfig cfg = scenario.pi_config;
  cfg.theta0 = scenario.resolve_theta0();
  w.windows.resize(M);
  w.trackers.resize(M);
  for (int i = 0; i < M; ++i) {
    const Vec2 e = tracking_error(w, i, tau);
    for (int ax = 0; ax < 2; ++ax) {
      w.windows[i][ax] = ErrorWindow::Constant(e(ax));
      if (i != tau) w.trackers[i][ax] = make_tracker(scenario.solver, cfg, scenario.utility,
                                                     mix_seed(scenario.seed, 1 + 2 * i + ax));
    }
  }
  w.fired.assign(scenario.events.size(), false);
  return w;
}

void apply_event(World& world, const Scenario& scenario, const Event& event) {
  if (event.type == Event::Type::Decommission) {
    for (int id : event.agents) {
      if (id < 0 || id >= static_cast<int>(world.agents.size()) || id == scenario.leader_index) {
        throw ConfigError("decommission names unknown agent " + std::to_string(id));
      }
      world.agents[id].alive = false;
      world.agents[id].velocity = Vec2::Zero();
    }
  } else {
    world.s = event.value;
    for (auto& rules : world.rules) rules = rescale_rule_base(rules, event.value);
  }
}

RunResult run(const Scenario& scenario) {
  World w = make_world(scenario);
  const int M = scenario.M;
  const int tau = scenario.leader_index;
  const double T = scenario.T;
  const int steps = scenario.steps();
  const std::vector<double> boundaries = scenario.stage_boundaries();
  std::size_t next_boundary = 0;
  // Windows are padded with the first measurement; learning starts once
  // every entry is a genuine sample.
  int measured = 1;

  RunResult result;
  result.trajectory.reserve(steps);
  result.metrics.reserve(steps);

  for (int k = 0; k < steps; ++k) {
    const double t = k * T;

    for (std::size_t n = 0; n < scenario.events.size(); ++n) {
      if (!w.fired[n] && scenario.events[n].time <= t + kTimeEps) {
        apply_event(w, scenario, scenario.events[n]);
        w.fired[n] = true;
      }
    }
    if (next_boundary < boundaries.size() && boundaries[next_boundary] <= t + kTimeEps) {
      while (next_boundary < boundaries.size() && boundaries[next_boundary] <= t + kTimeEps) ++next_boundary;
      for (int i = 0; i < M; ++i) {
        if (i == tau || !w.agents[i].alive) continue;
        for (auto& tr : w.trackers[i]) tr->restart();
      }
    }

    const std::vector<Vec2> pos = positions_of(w);
    const std::vector<bool> alive = alive_of(w);
    const GraphWeights graph = build_graph(pos, alive, scenario.connectivity);
    const bool complete = scenario.solver == Solver::VI && scenario.vi_fully_connected;

    StepRecord rec;
    rec.step = k;
    rec.controls.assign(M, ControlParts{});

    std::vector<AgentState> next = w.agents;
    const std::vector<AgentState> before = w.agents;
    for (int i = 0; i < M; ++i) {
      if (i == tau || !w.agents[i].alive) continue;
      ControlParts parts;
      for (int ax = 0; ax < 2; ++ax) parts.tracking(ax) = w.trackers[i][ax]->act(w.windows[i][ax]);

      const std::vector<int> nbrs = neighbors(graph, alive, i);
      std::vector<Vec2> nv;
      std::vector<double> nw;
      if (complete) {
        for (int j = 0; j < M; ++j) {
          if (j == i || !alive[j]) continue;
          nv.push_back(w.agents[j].velocity);
          nw.push_back(1.0);
        }
      } else {
        for (int j : nbrs) {
          nv.push_back(w.agents[j].velocity);
          nw.push_back(graph(i, j));
        }
      }
      parts.consensus = consensus_control(w.agents[i].velocity, nv, nw);

      for (int ax = 0; ax < 2; ++ax) {
        std::vector<double> d;
        d.reserve(nbrs.size());
        for (int j : nbrs) d.push_back(pos[i](ax) - pos[j](ax));
        parts.separation(ax) = aggregate_separation(d, w.rules[i]);
        if (w.rules[i].adaptive) {
          for (double dj : d) w.rules[i] = adapt_consequences(w.rules[i], dj, w.s);
        }
      }

      next[i] = step_agent(w.agents[i], parts.tracking + parts.consensus + parts.separation, T, scenario.limits);
      rec.controls[i] = parts;
    }

    const LeaderCommand cmd = scenario.leader_command_at(t);
    w.leader = step_leader(w.leader, cmd, T);
    next[tau].position = w.leader.position;
    next[tau].velocity = cmd.linear_speed * Vec2(std::cos(w.leader.heading), std::sin(w.leader.heading));
    w.agents = std::move(next);
    ++measured;

    for (int i = 0; i < M; ++i) {
      if (i == tau || !w.agents[i].alive) continue;
      const Vec2 e = tracking_error(w, i, tau);
      for (int ax = 0; ax < 2; ++ax) {
        w.windows[i][ax] = update_error_window(w.windows[i][ax], e(ax));
        if (measured > kWindowLength) {
          const double applied = (w.agents[i].velocity(ax) - before[i].velocity(ax)) / T;
          const TrackerRecord tr = w.trackers[i][ax]->learn(w.windows[i][ax], applied);
          WeightsRow row;
          row.step = k;
          row.agent = i;
          row.axis = ax;
          row.theta = tr.theta;
          row.gain = tr.gain;
          row.utility = tr.utility;
          row.residual = tr.residual;
          row.converged = tr.converged;
          row.learning = w.trackers[i][ax]->learning();
          result.weights.push_back(row);
        }
      }
    }

    w.time = (k + 1) * T;
    w.step = k + 1;
    rec.time = w.time;
    rec.agents = w.agents;
    rec.leader_heading = w.leader.heading;

    const std::vector<Vec2> pos_after = positions_of(w);
    const std::vector<bool> alive_after = alive_of(w);
    const GraphWeights g_after = build_graph(pos_after, alive_after, scenario.connectivity);
    double weight_sum = 0.0;
    for (int i = 0; i < M; ++i) {
      for (int j = i + 1; j < M; ++j) {
        if (g_after(i, j) > 0.0) {
          ++rec.graph_edges;
          weight_sum += g_after(i, j);
        }
      }
    }
    rec.graph_mean_weight = rec.graph_edges > 0 ? weight_sum / rec.graph_edges : 0.0;

    MetricsRow m;
    m.step = k;
    m.time = w.time;
    m.safety_distance = w.s;
    m.tracking = tracking_error_metric(pos_after, tau, alive_after, scenario.proximity(w.s));
    m.separation = separation_error_metric(pos_after, g_after, alive_after, tau, w.s);
    std::vector<Vec2> vel;
    for (const auto& a : w.agents) vel.push_back(a.velocity);
    m.speed = speed_metric(vel, alive_after, tau);
    m.min_distance = min_follower_distance(pos_after, alive_after, tau);
    for (int i = 0; i < M; ++i) m.alive_followers += (i != tau && alive_after[i]) ? 1 : 0;

    result.trajectory.push_back(std::move(rec));
    result.metrics.push_back(m);
  }
  return result;
}

LearningRun run_lq(const Scenario& scenario, Solver solver) {
  scenario.validate();
  if (scenario.kind != ScenarioKind::Lq) throw ConfigError("not an lq scenario");
  PiConfig cfg = scenario.pi_config;
  cfg.theta0 = scenario.resolve_theta0();
  if (solver == Solver::VI) cfg.T_n = scenario.lq.vi_budget;
  LqTrackingPlant plant(scenario.T, mix_seed(scenario.seed, 0), scenario.lq.episode_length, scenario.lq.init_range);
  auto tracker = make_tracker(solver, cfg, scenario.utility, mix_seed(scenario.seed, 1));
  return run_learning(plant, *tracker, cfg.T_n);
}

}  // namespace flockrl
