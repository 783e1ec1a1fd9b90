#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "flockrl/errors.hpp"
#include "flockrl/io.hpp"
#include "flockrl/sim.hpp"

namespace fs = std::filesystem;
using namespace flockrl;

namespace {

// sysexits-style status codes, one per failure class.
constexpr int kExitUsage = 64;
constexpr int kExitSchema = 65;
constexpr int kExitMissingFile = 66;
constexpr int kExitSolver = 70;
constexpr int kExitOutput = 73;

class OutputError : public Error {
 public:
  using Error::Error;
};

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw OutputError("cannot write " + path.string());
  out << content;
  if (!out) throw OutputError("failed writing " + path.string());
}

template <typename Fn>
std::string render(Fn&& fn) {
  std::ostringstream ss;
  fn(ss);
  return ss.str();
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw OutputError("cannot create directory " + dir.string() + ": " + ec.message());
}

std::string lq_trajectory_csv(const LearningRun& run) {
  std::ostringstream out;
  out << "step,z0,z1,z2,control\n";
  for (std::size_t k = 0; k < run.windows.size(); ++k) {
    const auto& Z = run.windows[k];
    out << k << ',' << format_double(Z(0)) << ',' << format_double(Z(1)) << ',' << format_double(Z(2)) << ','
        << format_double(run.controls[k]) << '\n';
  }
  return out.str();
}

std::string lq_metrics_csv(const LearningRun& run) {
  std::ostringstream out;
  out << "step,utility,residual,converged\n";
  for (const auto& r : run.log) {
    out << r.k << ',' << format_double(r.utility) << ',' << format_double(r.residual) << ','
        << (r.converged ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string gain_text(const Psi& psi) {
  if (!has_invertible_control_block(psi)) return "degenerate";
  const Gain g = policy_gain(psi);
  return "[" + format_double(g(0)) + ", " + format_double(g(1)) + ", " + format_double(g(2)) + "]";
}

void write_run(const Scenario& sc, const fs::path& dir, const std::string& command) {
  ensure_dir(dir);
  if (sc.kind == ScenarioKind::Lq) {
    const LearningRun lr = run_lq(sc, sc.solver);
    write_file(dir / "trajectory.csv", lq_trajectory_csv(lr));
    write_file(dir / "metrics.csv", lq_metrics_csv(lr));
    write_file(dir / "weights.csv", render([&](std::ostream& o) { write_weights_csv(o, weights_rows(lr)); }));
    write_file(dir / "manifest.json",
               run_manifest(sc, command, {"trajectory.csv", "metrics.csv", "weights.csv"}));
    std::cout << solver_name(sc.solver) << ": " << lr.iterations << " steps, "
              << (lr.converged ? "converged at step " + std::to_string(*lr.convergence_index) : "not converged")
              << ", gain " << gain_text(lr.psi) << '\n';
    return;
  }
  const RunResult res = run(sc);
  write_file(dir / "trajectory.csv", render([&](std::ostream& o) { write_trajectory_csv(o, res); }));
  write_file(dir / "metrics.csv", render([&](std::ostream& o) { write_metrics_csv(o, res); }));
  write_file(dir / "weights.csv", render([&](std::ostream& o) { write_weights_csv(o, res.weights); }));
  write_file(dir / "manifest.json", run_manifest(sc, command, {"trajectory.csv", "metrics.csv", "weights.csv"}));
  std::cout << solver_name(sc.solver) << ": " << res.metrics.size() << " steps written to " << dir.string() << '\n';
}

// Per-stage averages of the flock metrics over [begin, end).
struct StageSummary {
  double begin = 0.0;
  double end = 0.0;
  double abs_epsilon = 0.0;
  double separation = 0.0;
  double speed = 0.0;
};

std::vector<StageSummary> summarize(const Scenario& sc, const RunResult& res) {
  std::vector<double> cuts{0.0};
  for (double b : sc.stage_boundaries()) cuts.push_back(b);
  cuts.push_back(sc.duration);
  std::vector<StageSummary> out;
  for (std::size_t n = 0; n + 1 < cuts.size(); ++n) {
    StageSummary s{cuts[n], cuts[n + 1]};
    int count = 0;
    for (const auto& m : res.metrics) {
      if (m.time <= s.begin || m.time > s.end) continue;
      s.abs_epsilon += m.tracking ? std::abs(m.tracking->mean) : 0.0;
      s.separation += m.separation.mean;
      s.speed += m.speed.mean;
      ++count;
    }
    if (count > 0) {
      s.abs_epsilon /= count;
      s.separation /= count;
      s.speed /= count;
    }
    out.push_back(s);
  }
  return out;
}

void compare(Scenario sc, const fs::path& dir) {
  ensure_dir(dir);
  Scenario pi = sc;
  pi.solver = Solver::PI;
  Scenario vi = sc;
  vi.solver = Solver::VI;
  if (sc.kind == ScenarioKind::Lq) {
    const LearningRun a = run_lq(pi, Solver::PI);
    const LearningRun b = run_lq(vi, Solver::VI);
    const auto wa = weights_rows(a);
    const auto wb = weights_rows(b);
    write_file(dir / "weights_pi.csv", render([&](std::ostream& o) { write_weights_csv(o, wa); }));
    write_file(dir / "weights_vi.csv", render([&](std::ostream& o) { write_weights_csv(o, wb); }));
    std::ostringstream table;
    table << "solver,convergence_step,steps,gain0,gain1,gain2\n";
    for (const auto* r : {&a, &b}) {
      const bool pi_row = r == &a;
      const Gain g = has_invertible_control_block(r->psi) ? policy_gain(r->psi) : Gain::Constant(NAN);
      table << (pi_row ? "pi" : "vi") << ',' << first_converged_step(pi_row ? wa : wb) << ',' << r->iterations
            << ',' << format_double(g(0)) << ',' << format_double(g(1)) << ',' << format_double(g(2)) << '\n';
    }
    write_file(dir / "compare.csv", table.str());
    write_file(dir / "manifest.json", run_manifest(sc, "compare", {"weights_pi.csv", "weights_vi.csv", "compare.csv"}));
    std::cout << table.str();
    return;
  }
  const RunResult a = run(pi);
  const RunResult b = run(vi);
  std::ostringstream side;
  side << "step,time,epsilon_t_pi,epsilon_t_vi,separation_error_pi,separation_error_vi,speed_pi,speed_vi\n";
  for (std::size_t k = 0; k < a.metrics.size(); ++k) {
    const auto& ma = a.metrics[k];
    const auto& mb = b.metrics[k];
    auto eps = [](const MetricsRow& m) { return m.tracking ? format_double(m.tracking->mean) : std::string("NA"); };
    side << ma.step << ',' << format_double(ma.time) << ',' << eps(ma) << ',' << eps(mb) << ','
         << format_double(ma.separation.mean) << ',' << format_double(mb.separation.mean) << ','
         << format_double(ma.speed.mean) << ',' << format_double(mb.speed.mean) << '\n';
  }
  write_file(dir / "compare.csv", side.str());
  write_file(dir / "manifest.json", run_manifest(sc, "compare", {"compare.csv"}));
  const auto sa = summarize(sc, a);
  const auto sb = summarize(sc, b);
  std::cout << "stage        |eps| pi   |eps| vi   sep pi   sep vi   speed pi  speed vi\n";
  for (std::size_t n = 0; n < sa.size(); ++n) {
    std::printf("[%5.1f,%5.1f]  %8.3f  %8.3f  %7.3f  %7.3f  %8.3f  %8.3f\n", sa[n].begin, sa[n].end,
                sa[n].abs_epsilon, sb[n].abs_epsilon, sa[n].separation, sb[n].separation, sa[n].speed,
                sb[n].speed);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Leader-follower flocking with model-free policy-iteration tracking"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string solver;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "out";

  auto* run_cmd = app.add_subcommand("run", "Simulate a scenario and write CSV logs");
  run_cmd->add_option("scenario", scenario_path, "Scenario file")->required();
  run_cmd->add_option("--solver", solver, "Tracking solver")->check(CLI::IsMember({"pi", "vi"}));
  run_cmd->add_option("--seed", seed, "Override the scenario seed");
  run_cmd->add_option("--out", out_dir, "Output directory");

  auto* cmp_cmd = app.add_subcommand("compare", "Run PI and VI on the same seed");
  cmp_cmd->add_option("scenario", scenario_path, "Scenario file")->required();
  cmp_cmd->add_option("--seed", seed, "Override the scenario seed");
  cmp_cmd->add_option("--out", out_dir, "Output directory");

  auto* val_cmd = app.add_subcommand("validate", "Check a scenario file against the schema");
  val_cmd->add_option("scenario", scenario_path, "Scenario file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    Scenario sc = load_scenario(scenario_path);
    if (seed) sc.seed = *seed;
    if (!solver.empty()) sc.solver = solver == "vi" ? Solver::VI : Solver::PI;

    if (val_cmd->parsed()) {
      std::cout << "ok: " << scenario_path << " (" << kind_name(sc.kind) << ", schema_version "
                << sc.schema_version << ")\n";
    } else if (run_cmd->parsed()) {
      write_run(sc, out_dir, "run");
    } else {
      compare(sc, out_dir);
    }
  } catch (const FileError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitMissingFile;
  } catch (const ConfigError& e) {
    std::cerr << "schema error: " << e.what() << '\n';
    return kExitSchema;
  } catch (const OutputError& e) {
    std::cerr << "output error: " << e.what() << '\n';
    return kExitOutput;
  } catch (const std::exception& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kExitSolver;
  }
  return 0;
}
