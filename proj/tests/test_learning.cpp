#include <cmath>
#include <random>
#include <type_traits>

#include "doctest.h"
#include "flockrl/errors.hpp"
#include "flockrl/lq.hpp"
#include "flockrl/pi_tracker.hpp"
#include "flockrl/scenario.hpp"
#include "flockrl/sim.hpp"
#include "flockrl/vi_tracker.hpp"
#include "support/lq_fixture.hpp"
#include "support/oracles.hpp"

using namespace flockrl;

namespace {

constexpr double kT = 0.05;

const oracle::Riccati& riccati() {
  static const oracle::Riccati r = [] {
    const UtilityParams p;
    return oracle::solve_riccati(oracle::error_A(), oracle::error_B(kT), p.J, p.K);
  }();
  return r;
}

class ZeroPlant : public ErrorPlant {
 public:
  ErrorWindow observe() override { return ErrorWindow::Zero(); }
  ErrorWindow apply(double) override { return ErrorWindow::Zero(); }
};

PiConfig lq_config() { return default_lq_scenario().pi_config; }

LearningRun learn_lq(Solver solver, std::uint64_t plant_seed, std::uint64_t tracker_seed, PiConfig cfg,
                     int budget) {
  const Scenario sc = default_lq_scenario();
  LqTrackingPlant plant(kT, plant_seed, sc.lq.episode_length, sc.lq.init_range);
  auto tracker = make_tracker(solver, cfg, sc.utility, tracker_seed);
  return run_learning(plant, *tracker, budget);
}

double oracle_cost(const Gain& g) {
  const UtilityParams p;
  return oracle::expected_cost(oracle::policy_value(oracle::error_A(), oracle::error_B(kT), p.J, p.K, g));
}

}  // namespace

TEST_SUITE("learning") {

TEST_CASE("riccati oracle matches frozen values") {
  const oracle::Riccati& r = riccati();
  CHECK(r.gain(0) == doctest::Approx(11.7706867).epsilon(1e-7));
  CHECK(r.gain(1) == doctest::Approx(-11.60001157).epsilon(1e-7));
  CHECK(std::abs(r.gain(2)) < 1e-9);
  CHECK(r.H(0, 0) == doctest::Approx(49.2127069).epsilon(1e-7));
  CHECK(r.H(0, 1) == doctest::Approx(-48.4889271).epsilon(1e-7));
  CHECK(r.H(1, 1) == doctest::Approx(47.7860369).epsilon(1e-7));
  CHECK(r.H(2, 2) == doctest::Approx(1e-4).epsilon(1e-7));
  CHECK(r.H(0, 3) == doctest::Approx(0.121222318).epsilon(1e-7));
  CHECK(r.H(1, 3) == doctest::Approx(-0.119464592).epsilon(1e-7));
  CHECK(r.H(3, 3) == doctest::Approx(0.0102986615).epsilon(1e-7));
}

TEST_CASE("Q-value iteration agrees with the Riccati oracle") {
  const QIterationResult q = nominal_q_matrix(double_integrator_error_model(kT), UtilityParams{}, 1e-12);
  CHECK(q.residual < 1e-10);
  const double scale = riccati().H.cwiseAbs().maxCoeff();
  CHECK((q.H - riccati().H).cwiseAbs().maxCoeff() / scale < 1e-8);
  CHECK(fixture::gain_error(policy_gain(q.H), riccati().gain) < 1e-8);
}

TEST_CASE("error model matches the double integrator") {
  const ErrorModel m = double_integrator_error_model(kT);
  CHECK(m.A == oracle::error_A());
  CHECK(m.B == oracle::error_B(kT));
  // A chased target moving at constant velocity: position error obeys the model.
  AgentState a;
  a.velocity = Vec2(0.3, 0);
  Vec2 target(1, 0);
  const Vec2 tv(0.5, 0);
  ErrorWindow Z = ErrorWindow::Zero();
  std::vector<double> e;
  for (int k = 0; k < 5; ++k) {
    e.push_back(a.position.x() - target.x());
    const double c = 0.1 * k;
    if (e.size() >= 3) {
      Z << e[e.size() - 1], e[e.size() - 2], e[e.size() - 3];
      AgentState b = step_agent(a, Vec2(c, 0), kT, Limits{10, 10});
      const double next = b.position.x() - (target.x() + kT * tv.x());
      CHECK((m.A * Z + m.B * c)(0) == doctest::Approx(next).epsilon(1e-12));
    }
    a = step_agent(a, Vec2(c, 0), kT, Limits{10, 10});
    target += kT * tv;
  }
}

TEST_CASE("pi tracker at the origin without dither stays put") {
  PiConfig cfg;
  cfg.excitation_amplitude = 0.0;
  PiTracker tr(cfg, UtilityParams{}, 1);
  const Theta before = tr.theta();
  CHECK(tr.act(ErrorWindow::Zero()) == 0.0);
  const TrackerRecord rec = tr.learn(ErrorWindow::Zero());
  CHECK(rec.theta == before);
  CHECK(rec.residual == 0.0);
}

TEST_CASE("window criterion fires once the history is full of equal weights") {
  PiConfig cfg;
  cfg.excitation_amplitude = 0.0;
  cfg.window = 2;
  cfg.xi = 1e-4;
  PiTracker tr(cfg, UtilityParams{}, 1);
  for (int n = 0; n < 2; ++n) {
    tr.act(ErrorWindow::Zero());
    CHECK_FALSE(tr.learn(ErrorWindow::Zero()).converged);
  }
  tr.act(ErrorWindow::Zero());
  CHECK(tr.learn(ErrorWindow::Zero()).converged);
  CHECK(tr.convergence_index() == 2);
  CHECK_FALSE(tr.learning());
}

TEST_CASE("learn without act is an input error") {
  PiTracker tr(PiConfig{}, UtilityParams{}, 1);
  CHECK_THROWS_AS(tr.learn(ErrorWindow::Zero()), InputError);
}

TEST_CASE("tracker interface is model free") {
  static_assert(std::is_constructible_v<PiTracker, PiConfig, UtilityParams, std::uint64_t>);
  static_assert(std::is_invocable_r_v<double, decltype(&Tracker::act), Tracker&, const ErrorWindow&>);
  static_assert(std::is_invocable_r_v<TrackerRecord, decltype(&Tracker::learn), Tracker&, const ErrorWindow&,
                                      std::optional<double>>);
  CHECK(true);
}

TEST_CASE("algorithm on a plant that holds zero returns the initial critic") {
  ZeroPlant plant;
  PiConfig cfg;
  cfg.excitation_amplitude = 0.0;
  const LearningRun run = run_algorithm1(plant, UtilityParams{}, cfg, 3);
  CHECK(run.converged);
  CHECK(run.psi == theta_to_psi(cfg.theta0));
}

TEST_CASE("policy iteration reaches the Riccati gain on the lq plant") {
  const PiConfig cfg = lq_config();
  const LearningRun run = learn_lq(Solver::PI, 11, 12, cfg, cfg.T_n);
  REQUIRE(run.converged);
  CHECK(run.iterations <= 400);
  CHECK(fixture::gain_error(policy_gain(run.psi), riccati().gain) < 0.05);
  CHECK(fixture::validation_residual(run.psi, UtilityParams{}, kT, 777) < 1e-3);
}

TEST_CASE("policy iteration is consistent across dither seeds") {
  const PiConfig cfg = lq_config();
  const LearningRun a = learn_lq(Solver::PI, 11, 1, cfg, cfg.T_n);
  const LearningRun b = learn_lq(Solver::PI, 11, 2, cfg, cfg.T_n);
  REQUIRE(a.converged);
  REQUIRE(b.converged);
  CHECK(fixture::gain_error(policy_gain(a.psi), policy_gain(b.psi)) < 0.02);
}

TEST_CASE("optimal critic has zero Bellman residual along undithered trajectories") {
  PiConfig cfg = lq_config();
  cfg.theta0 = psi_to_theta(riccati().H);
  cfg.excitation_amplitude = 0.0;
  cfg.stop_on_convergence = false;
  cfg.improve_every = 1000000;
  const LearningRun run = learn_lq(Solver::PI, 5, 5, cfg, 300);
  for (const auto& rec : run.log) REQUIRE(std::abs(rec.residual) <= 1e-6);
}

TEST_CASE("convergence is monotone in the threshold") {
  PiConfig cfg = lq_config();
  std::optional<int> prev;
  for (double xi : {2e-4, 5e-4, 1e-3, 1e-2, 1e-1}) {
    cfg.xi = xi;
    const LearningRun run = learn_lq(Solver::PI, 21, 22, cfg, cfg.T_n);
    if (prev) {
      REQUIRE(run.convergence_index.has_value());
      CHECK(*run.convergence_index <= *prev);
    }
    if (run.convergence_index) prev = run.convergence_index;
  }
  CHECK(prev.has_value());
}

TEST_CASE("policy improvement never raises the oracle cost") {
  const PiConfig cfg = lq_config();
  const LearningRun run = learn_lq(Solver::PI, 31, 32, cfg, cfg.T_n);
  double cost = oracle_cost(policy_gain(theta_to_psi(cfg.theta0)));
  REQUIRE(std::isfinite(cost));
  int improvements = 0;
  for (const auto& rec : run.log) {
    if (!rec.improved) continue;
    const double next = oracle_cost(rec.gain);
    CHECK(next <= cost + 1e-6);
    cost = next;
    ++improvements;
  }
  CHECK(improvements > 0);
  CHECK(cost == doctest::Approx(oracle_cost(riccati().gain)).epsilon(1e-3));
}

TEST_CASE("value iteration at the origin without dither stays put") {
  PiConfig cfg;
  cfg.excitation_amplitude = 0.0;
  ViTracker tr(cfg, UtilityParams{}, 1);
  const Theta before = tr.theta();
  CHECK(tr.act(ErrorWindow::Zero()) == 0.0);
  CHECK(tr.learn(ErrorWindow::Zero()).theta == before);
}

TEST_CASE("value iteration reaches the Riccati gain but later than policy iteration") {
  const Scenario sc = default_lq_scenario();
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    Scenario s = sc;
    s.seed = seed;
    const LearningRun pi = run_lq(s, Solver::PI);
    const LearningRun vi = run_lq(s, Solver::VI);
    REQUIRE(pi.convergence_index.has_value());
    REQUIRE(vi.convergence_index.has_value());
    CHECK(*pi.convergence_index < *vi.convergence_index);
    CHECK(fixture::gain_error(policy_gain(vi.psi), riccati().gain) < 0.05);
    const double cp = oracle_cost(policy_gain(pi.psi));
    const double cv = oracle_cost(policy_gain(vi.psi));
    CHECK(std::abs(cp - cv) / std::min(cp, cv) < 0.01);
  }
}

TEST_CASE("value iteration with a frozen target solves one ridge regression") {
  PiConfig cfg = lq_config();
  cfg.P0_scale = 100.0;
  cfg.target_refresh = 1000000;
  cfg.stop_on_convergence = false;
  const int steps = 200;
  const LearningRun run = learn_lq(Solver::VI, 41, 42, cfg, steps);
  const oracle::Mat4 target = theta_to_psi(cfg.theta0);
  const Eigen::RowVector3d g = target.block<1, 3>(3, 0) / target(3, 3);
  const UtilityParams p;
  Eigen::MatrixXd Phi(steps, 10);
  Eigen::VectorXd W(steps);
  for (int k = 0; k < steps; ++k) {
    const oracle::Vec3 Z = run.windows[k];
    const double c = run.controls[k];
    const oracle::Vec3 Zn = oracle::error_A() * Z + oracle::error_B(kT) * c;
    Eigen::Vector4d z, zn;
    z << Z, c;
    zn << Zn, -g.dot(Zn);
    Phi.row(k) = oracle::monomials(z).transpose();
    W(k) = 0.5 * (Z.dot(p.J * Z) + p.K * c * c) + oracle::quadratic_q(target, Zn, zn(3));
  }
  const Eigen::VectorXd batch = oracle::ridge_batch(Phi, W, cfg.theta0, cfg.P0_scale);
  CHECK((run.log.back().theta - batch).norm() / batch.norm() < 1e-6);
}

TEST_CASE("value iteration target is self-consistent at the fixed point") {
  PiConfig cfg = lq_config();
  cfg.theta0 = psi_to_theta(riccati().H);
  cfg.stop_on_convergence = false;
  const LearningRun run = learn_lq(Solver::VI, 51, 52, cfg, 9);
  for (const auto& rec : run.log) REQUIRE(std::abs(rec.residual) <= 1e-6);
}

TEST_CASE("restart resumes learning with a fresh covariance") {
  const PiConfig cfg = lq_config();
  PiTracker tr(cfg, UtilityParams{}, 9);
  LqTrackingPlant plant(kT, 9, 20, 1.0);
  run_learning(plant, tr, cfg.T_n);
  REQUIRE_FALSE(tr.learning());
  const Theta theta = tr.theta();
  tr.restart();
  CHECK(tr.learning());
  CHECK_FALSE(tr.converged());
  CHECK(tr.iteration() == 0);
  CHECK(tr.theta() == theta);
  CHECK(tr.rls().P == cfg.P0_scale * Covariance::Identity());
}

}
