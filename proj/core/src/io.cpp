#include "flockrl/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "flockrl/errors.hpp"

namespace flockrl {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) throw ConfigError("unknown key '" + item.key() + "' in " + where);
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("bad value for '" + std::string(key) + "' in " + where);
  }
}

Vec2 read_vec2(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ConfigError(where + " must be a two-element numeric array");
  }
  return Vec2(v[0].get<double>(), v[1].get<double>());
}

json write_vec2(const Vec2& v) { return json::array({v.x(), v.y()}); }

const std::pair<const char*, MembershipShape> kShapes[] = {
    {"triangle", MembershipShape::Triangle},          {"gaussian", MembershipShape::Gaussian},
    {"left_shoulder", MembershipShape::LeftShoulder}, {"right_shoulder", MembershipShape::RightShoulder},
    {"left_half", MembershipShape::LeftHalf},         {"right_half", MembershipShape::RightHalf},
};

MembershipShape parse_shape(const std::string& name) {
  for (const auto& [key, shape] : kShapes) {
    if (name == key) return shape;
  }
  throw ConfigError("unknown membership shape '" + name + "'");
}

const char* shape_name(MembershipShape shape) {
  for (const auto& [key, s] : kShapes) {
    if (s == shape) return key;
  }
  return "triangle";
}

Solver parse_solver(const std::string& s) {
  if (s == "pi") return Solver::PI;
  if (s == "vi") return Solver::VI;
  throw ConfigError("solver must be 'pi' or 'vi'");
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

Scenario parse_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("scenario is not valid JSON: ") + e.what());
  }
  check_keys(doc, {"schema_version", "name", "kind", "agents", "time", "leader_schedule", "events", "objectives",
                   "limits", "connectivity", "utility", "learning", "separation", "baseline", "lq", "seed"},
             "scenario");
  if (!doc.contains("schema_version")) throw ConfigError("scenario lacks schema_version");

  Scenario sc;
  read(doc, "schema_version", sc.schema_version, "scenario");
  read(doc, "name", sc.name, "scenario");
  if (doc.contains("kind")) {
    const std::string kind = doc.at("kind").is_string() ? doc.at("kind").get<std::string>() : "";
    if (kind == "flock") sc.kind = ScenarioKind::Flock;
    else if (kind == "lq") sc.kind = ScenarioKind::Lq;
    else throw ConfigError("kind must be 'flock' or 'lq'");
  }
  read(doc, "seed", sc.seed, "scenario");

  if (doc.contains("agents")) {
    const json& a = doc["agents"];
    check_keys(a, {"M", "leader_index", "initial_states", "scatter", "leader_start"}, "agents");
    read(a, "M", sc.M, "agents");
    read(a, "leader_index", sc.leader_index, "agents");
    if (a.contains("initial_states")) {
      if (!a["initial_states"].is_array()) throw ConfigError("agents.initial_states must be an array");
      for (const auto& st : a["initial_states"]) {
        check_keys(st, {"position", "velocity"}, "agents.initial_states[]");
        AgentState s;
        if (st.contains("position")) s.position = read_vec2(st["position"], "initial position");
        if (st.contains("velocity")) s.velocity = read_vec2(st["velocity"], "initial velocity");
        sc.initial_states.push_back(s);
      }
    }
    if (a.contains("scatter")) {
      const json& s = a["scatter"];
      check_keys(s, {"width", "height", "offset"}, "agents.scatter");
      read(s, "width", sc.scatter.width, "agents.scatter");
      read(s, "height", sc.scatter.height, "agents.scatter");
      if (s.contains("offset")) sc.scatter.offset = read_vec2(s["offset"], "agents.scatter.offset");
    }
    if (a.contains("leader_start")) {
      const json& l = a["leader_start"];
      check_keys(l, {"position", "heading"}, "agents.leader_start");
      if (l.contains("position")) sc.leader_start.position = read_vec2(l["position"], "leader position");
      read(l, "heading", sc.leader_start.heading, "agents.leader_start");
    }
  }

  if (doc.contains("time")) {
    const json& t = doc["time"];
    check_keys(t, {"T", "duration"}, "time");
    read(t, "T", sc.T, "time");
    read(t, "duration", sc.duration, "time");
  }

  if (doc.contains("leader_schedule")) {
    if (!doc["leader_schedule"].is_array()) throw ConfigError("leader_schedule must be an array");
    for (const auto& c : doc["leader_schedule"]) {
      check_keys(c, {"linear_speed", "angular_rate", "angular_rate_deg", "duration"}, "leader_schedule[]");
      LeaderCommand cmd;
      read(c, "linear_speed", cmd.linear_speed, "leader_schedule[]");
      read(c, "angular_rate", cmd.angular_rate, "leader_schedule[]");
      if (c.contains("angular_rate_deg")) {
        if (c.contains("angular_rate")) throw ConfigError("give angular_rate or angular_rate_deg, not both");
        double deg = 0.0;
        read(c, "angular_rate_deg", deg, "leader_schedule[]");
        cmd.angular_rate = deg * kDegToRad;
      }
      read(c, "duration", cmd.duration, "leader_schedule[]");
      sc.leader_schedule.push_back(cmd);
    }
  }

  if (doc.contains("events")) {
    if (!doc["events"].is_array()) throw ConfigError("events must be an array");
    for (const auto& e : doc["events"]) {
      check_keys(e, {"time", "type", "agents", "value"}, "events[]");
      Event ev;
      read(e, "time", ev.time, "events[]");
      std::string type;
      read(e, "type", type, "events[]");
      if (type == "decommission") {
        ev.type = Event::Type::Decommission;
        read(e, "agents", ev.agents, "events[]");
      } else if (type == "set_safety_distance") {
        ev.type = Event::Type::SetSafetyDistance;
        read(e, "value", ev.value, "events[]");
      } else {
        throw ConfigError("event type must be 'decommission' or 'set_safety_distance'");
      }
      sc.events.push_back(ev);
    }
  }

  if (doc.contains("objectives")) {
    const json& o = doc["objectives"];
    check_keys(o, {"d_t", "s"}, "objectives");
    read(o, "s", sc.s, "objectives");
    if (o.contains("d_t")) {
      if (o["d_t"].is_string()) {
        if (o["d_t"].get<std::string>() != "s") throw ConfigError("objectives.d_t must be a number or \"s\"");
        sc.d_t_tracks_s = true;
      } else {
        read(o, "d_t", sc.d_t, "objectives");
        sc.d_t_tracks_s = false;
      }
    }
    if (sc.d_t_tracks_s) sc.d_t = sc.s;
  }

  if (doc.contains("limits")) {
    const json& l = doc["limits"];
    check_keys(l, {"v_max", "a_max"}, "limits");
    read(l, "v_max", sc.limits.v_max, "limits");
    read(l, "a_max", sc.limits.a_max, "limits");
  }

  if (doc.contains("connectivity")) {
    const json& c = doc["connectivity"];
    check_keys(c, {"a", "r", "mu"}, "connectivity");
    read(c, "a", sc.connectivity.a, "connectivity");
    read(c, "r", sc.connectivity.r, "connectivity");
    read(c, "mu", sc.connectivity.mu, "connectivity");
  }

  if (doc.contains("utility")) {
    const json& u = doc["utility"];
    check_keys(u, {"J", "K"}, "utility");
    if (u.contains("J")) {
      const json& J = u["J"];
      if (!J.is_array() || J.size() != 3) throw ConfigError("utility.J must be a 3x3 array");
      for (int r = 0; r < 3; ++r) {
        if (!J[r].is_array() || J[r].size() != 3) throw ConfigError("utility.J must be a 3x3 array");
        for (int c = 0; c < 3; ++c) {
          if (!J[r][c].is_number()) throw ConfigError("utility.J entries must be numbers");
          sc.utility.J(r, c) = J[r][c].get<double>();
        }
      }
    }
    read(u, "K", sc.utility.K, "utility");
  }

  if (doc.contains("learning")) {
    const json& l = doc["learning"];
    check_keys(l, {"solver", "T_n", "xi", "window", "P0_scale", "theta0", "excitation_amplitude",
                   "excitation_decay", "improve_every", "target_refresh", "reset_covariance_on_improve",
                   "require_positive_definite", "stop_on_convergence"},
               "learning");
    if (l.contains("solver")) {
      std::string s;
      read(l, "solver", s, "learning");
      sc.solver = parse_solver(s);
    }
    PiConfig& p = sc.pi_config;
    read(l, "T_n", p.T_n, "learning");
    read(l, "xi", p.xi, "learning");
    read(l, "window", p.window, "learning");
    read(l, "P0_scale", p.P0_scale, "learning");
    read(l, "excitation_amplitude", p.excitation_amplitude, "learning");
    read(l, "excitation_decay", p.excitation_decay, "learning");
    read(l, "improve_every", p.improve_every, "learning");
    read(l, "target_refresh", p.target_refresh, "learning");
    read(l, "reset_covariance_on_improve", p.reset_covariance_on_improve, "learning");
    read(l, "require_positive_definite", p.require_positive_definite, "learning");
    read(l, "stop_on_convergence", p.stop_on_convergence, "learning");
    if (l.contains("theta0")) {
      const json& t = l["theta0"];
      if (t.is_string()) {
        const std::string mode = t.get<std::string>();
        if (mode == "identity") sc.theta0_mode = Theta0Mode::Identity;
        else if (mode == "nominal") sc.theta0_mode = Theta0Mode::Nominal;
        else throw ConfigError("learning.theta0 must be 'identity', 'nominal' or 10 numbers");
      } else if (t.is_array() && t.size() == kThetaSize) {
        sc.theta0_mode = Theta0Mode::Explicit;
        for (int n = 0; n < kThetaSize; ++n) {
          if (!t[n].is_number()) throw ConfigError("learning.theta0 entries must be numbers");
          p.theta0(n) = t[n].get<double>();
        }
      } else {
        throw ConfigError("learning.theta0 must be 'identity', 'nominal' or 10 numbers");
      }
    }
  }

  if (doc.contains("separation")) {
    const json& s = doc["separation"];
    check_keys(s, {"rules", "eta0", "normalized", "adaptive", "learning_rate", "consequence_bound"}, "separation");
    if (s.contains("rules")) {
      if (!s["rules"].is_array()) throw ConfigError("separation.rules must be an array");
      for (const auto& r : s["rules"]) {
        check_keys(r, {"shape", "center", "width", "consequence"}, "separation.rules[]");
        RuleSpec spec;
        std::string shape = "triangle";
        read(r, "shape", shape, "separation.rules[]");
        spec.shape = parse_shape(shape);
        read(r, "center", spec.center, "separation.rules[]");
        read(r, "width", spec.width, "separation.rules[]");
        read(r, "consequence", spec.consequence, "separation.rules[]");
        sc.separation.rules.push_back(spec);
      }
    }
    read(s, "eta0", sc.separation.eta0, "separation");
    read(s, "normalized", sc.separation.normalized, "separation");
    read(s, "adaptive", sc.separation.adaptive, "separation");
    read(s, "learning_rate", sc.separation.learning_rate, "separation");
    read(s, "consequence_bound", sc.separation.consequence_bound, "separation");
  }

  if (doc.contains("baseline")) {
    const json& b = doc["baseline"];
    check_keys(b, {"vi_fully_connected"}, "baseline");
    read(b, "vi_fully_connected", sc.vi_fully_connected, "baseline");
  }

  if (doc.contains("lq")) {
    const json& q = doc["lq"];
    check_keys(q, {"episode_length", "init_range", "vi_budget"}, "lq");
    read(q, "episode_length", sc.lq.episode_length, "lq");
    read(q, "init_range", sc.lq.init_range, "lq");
    read(q, "vi_budget", sc.lq.vi_budget, "lq");
  }

  sc.validate();
  if (sc.theta0_mode != Theta0Mode::Explicit) sc.pi_config.theta0 = sc.resolve_theta0();
  return sc;
}

namespace {

json scenario_json(const Scenario& sc) {
  json doc;
  doc["schema_version"] = sc.schema_version;
  doc["name"] = sc.name;
  doc["kind"] = kind_name(sc.kind);
  doc["seed"] = sc.seed;

  json agents;
  agents["M"] = sc.M;
  agents["leader_index"] = sc.leader_index;
  if (!sc.initial_states.empty()) {
    json states = json::array();
    for (const auto& s : sc.initial_states) {
      states.push_back({{"position", write_vec2(s.position)}, {"velocity", write_vec2(s.velocity)}});
    }
    agents["initial_states"] = states;
  }
  agents["scatter"] = {{"width", sc.scatter.width}, {"height", sc.scatter.height},
                       {"offset", write_vec2(sc.scatter.offset)}};
  agents["leader_start"] = {{"position", write_vec2(sc.leader_start.position)},
                            {"heading", sc.leader_start.heading}};
  doc["agents"] = agents;

  doc["time"] = {{"T", sc.T}, {"duration", sc.duration}};

  json schedule = json::array();
  for (const auto& c : sc.leader_schedule) {
    schedule.push_back({{"linear_speed", c.linear_speed}, {"angular_rate", c.angular_rate}, {"duration", c.duration}});
  }
  doc["leader_schedule"] = schedule;

  json events = json::array();
  for (const auto& e : sc.events) {
    if (e.type == Event::Type::Decommission) {
      events.push_back({{"time", e.time}, {"type", "decommission"}, {"agents", e.agents}});
    } else {
      events.push_back({{"time", e.time}, {"type", "set_safety_distance"}, {"value", e.value}});
    }
  }
  doc["events"] = events;

  json objectives;
  objectives["s"] = sc.s;
  if (sc.d_t_tracks_s) objectives["d_t"] = "s";
  else objectives["d_t"] = sc.d_t;
  doc["objectives"] = objectives;

  doc["limits"] = {{"v_max", sc.limits.v_max}, {"a_max", sc.limits.a_max}};
  doc["connectivity"] = {{"a", sc.connectivity.a}, {"r", sc.connectivity.r}, {"mu", sc.connectivity.mu}};

  json J = json::array();
  for (int r = 0; r < 3; ++r) J.push_back({sc.utility.J(r, 0), sc.utility.J(r, 1), sc.utility.J(r, 2)});
  doc["utility"] = {{"J", J}, {"K", sc.utility.K}};

  const PiConfig& p = sc.pi_config;
  json learning;
  learning["solver"] = solver_name(sc.solver);
  learning["T_n"] = p.T_n;
  learning["xi"] = p.xi;
  learning["window"] = p.window;
  learning["P0_scale"] = p.P0_scale;
  if (sc.theta0_mode == Theta0Mode::Explicit) {
    learning["theta0"] = std::vector<double>(p.theta0.data(), p.theta0.data() + kThetaSize);
  } else {
    learning["theta0"] = theta0_mode_name(sc.theta0_mode);
  }
  learning["excitation_amplitude"] = p.excitation_amplitude;
  learning["excitation_decay"] = p.excitation_decay;
  learning["improve_every"] = p.improve_every;
  learning["target_refresh"] = p.target_refresh;
  learning["reset_covariance_on_improve"] = p.reset_covariance_on_improve;
  learning["require_positive_definite"] = p.require_positive_definite;
  learning["stop_on_convergence"] = p.stop_on_convergence;
  doc["learning"] = learning;

  json rules = json::array();
  for (const auto& r : sc.separation.rules) {
    rules.push_back({{"shape", shape_name(r.shape)}, {"center", r.center}, {"width", r.width},
                     {"consequence", r.consequence}});
  }
  doc["separation"] = {{"rules", rules},
                       {"eta0", sc.separation.eta0},
                       {"normalized", sc.separation.normalized},
                       {"adaptive", sc.separation.adaptive},
                       {"learning_rate", sc.separation.learning_rate},
                       {"consequence_bound", sc.separation.consequence_bound}};
  doc["baseline"] = {{"vi_fully_connected", sc.vi_fully_connected}};
  doc["lq"] = {{"episode_length", sc.lq.episode_length},
               {"init_range", sc.lq.init_range},
               {"vi_budget", sc.lq.vi_budget}};
  return doc;
}

}  // namespace

std::string serialize_scenario(const Scenario& scenario) { return scenario_json(scenario).dump(2) + "\n"; }

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open scenario file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

void write_trajectory_csv(std::ostream& out, const RunResult& result) {
  const int M = result.trajectory.empty() ? 0 : static_cast<int>(result.trajectory.front().agents.size());
  out << "step,time,leader_heading,graph_edges,graph_mean_weight";
  for (int i = 0; i < M; ++i) {
    for (const char* col : {"alive", "x", "y", "vx", "vy", "ct_x", "ct_y", "cv_x", "cv_y", "cd_x", "cd_y"}) {
      out << ",a" << i << '_' << col;
    }
  }
  out << '\n';
  for (const auto& r : result.trajectory) {
    out << r.step << ',' << format_double(r.time) << ',' << format_double(r.leader_heading) << ','
        << r.graph_edges << ',' << format_double(r.graph_mean_weight);
    for (int i = 0; i < M; ++i) {
      const auto& a = r.agents[i];
      const auto& c = r.controls[i];
      out << ',' << (a.alive ? 1 : 0);
      for (double v : {a.position.x(), a.position.y(), a.velocity.x(), a.velocity.y(), c.tracking.x(),
                       c.tracking.y(), c.consensus.x(), c.consensus.y(), c.separation.x(), c.separation.y()}) {
        out << ',' << format_double(v);
      }
    }
    out << '\n';
  }
}

void write_metrics_csv(std::ostream& out, const RunResult& result) {
  out << "step,time,alive_followers,safety_distance,epsilon_t,epsilon_t_std,separation_error,"
         "separation_error_std,speed_mean,speed_std,min_follower_distance\n";
  for (const auto& m : result.metrics) {
    out << m.step << ',' << format_double(m.time) << ',' << m.alive_followers << ','
        << format_double(m.safety_distance) << ',';
    if (m.tracking) out << format_double(m.tracking->mean) << ',' << format_double(m.tracking->std);
    else out << "NA,NA";
    out << ',' << format_double(m.separation.mean) << ',' << format_double(m.separation.std) << ','
        << format_double(m.speed.mean) << ',' << format_double(m.speed.std) << ','
        << format_double(m.min_distance) << '\n';
  }
}

void write_weights_csv(std::ostream& out, const std::vector<WeightsRow>& rows) {
  out << "step,agent,axis";
  for (int n = 0; n < kThetaSize; ++n) out << ",theta" << n;
  out << ",gain0,gain1,gain2,utility,residual,converged,learning\n";
  for (const auto& r : rows) {
    out << r.step << ',' << r.agent << ',' << r.axis;
    for (int n = 0; n < kThetaSize; ++n) out << ',' << format_double(r.theta(n));
    for (int n = 0; n < 3; ++n) out << ',' << format_double(r.gain(n));
    out << ',' << format_double(r.utility) << ',' << format_double(r.residual) << ',' << (r.converged ? 1 : 0)
        << ',' << (r.learning ? 1 : 0) << '\n';
  }
}

std::vector<WeightsRow> weights_rows(const LearningRun& run) {
  std::vector<WeightsRow> rows;
  rows.reserve(run.log.size());
  for (std::size_t n = 0; n < run.log.size(); ++n) {
    const auto& rec = run.log[n];
    WeightsRow row;
    row.step = rec.k;
    row.theta = rec.theta;
    row.gain = rec.gain;
    row.utility = rec.utility;
    row.residual = rec.residual;
    row.converged = rec.converged;
    row.learning = !rec.converged;
    rows.push_back(row);
  }
  return rows;
}

int first_converged_step(const std::vector<WeightsRow>& rows) {
  for (const auto& r : rows) {
    if (r.converged) return r.step;
  }
  return -1;
}

std::string run_manifest(const Scenario& scenario, const std::string& command,
                         const std::vector<std::string>& outputs) {
  json m;
  m["tool"] = "flockrl";
  m["version"] = "0.1.0";
  m["command"] = command;
  m["solver"] = solver_name(scenario.solver);
  m["seed"] = scenario.seed;
  m["schema_version"] = kSchemaVersion;
  m["outputs"] = outputs;
  m["metric_definitions"] = {
      {"epsilon_t", "mean alive-follower distance to the leader minus d_t"},
      {"separation_error", "mean of | ||g_i - g_j|| - s | over alive follower pairs with s_ij > 0 (connected pairs only)"},
      {"speed", "mean and population standard deviation of alive-follower speeds"},
  };
  m["scenario"] = scenario_json(scenario);
  return m.dump(2) + "\n";
}

}  // namespace flockrl
