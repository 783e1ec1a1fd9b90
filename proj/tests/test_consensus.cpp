#include <random>

#include "doctest.h"
#include "flockrl/connectivity.hpp"
#include "flockrl/consensus.hpp"
#include "flockrl/errors.hpp"
#include "flockrl/kinematics.hpp"

using namespace flockrl;

TEST_SUITE("consensus") {

TEST_CASE("consensus examples") {
  CHECK(consensus_control(1.5, {1.5, 1.5}, {0.3, 0.9}) == 0.0);
  CHECK(consensus_control(1.0, {0.0}, {1.0}) == -1.0);
  CHECK(consensus_control(2.0, {1.0, 3.0, 2.0}, {0.5, 0.2, 0.1}) == doctest::Approx(-0.3).epsilon(1e-15));
  CHECK(consensus_control(2.0, {}, {}) == 0.0);
  CHECK(consensus_control(Vec2(1, 2), {}, {}) == Vec2::Zero());
}

TEST_CASE("consensus rejects mismatched inputs") {
  CHECK_THROWS_AS(consensus_control(1.0, {1.0, 2.0}, {0.5}), InputError);
  CHECK_THROWS_AS(consensus_control(Vec2(1, 1), {Vec2(0, 0)}, {}), InputError);
}

TEST_CASE("consensus is linear and matches brute force per axis") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-2, 2), W(0, 1);
  for (int n = 0; n < 500; ++n) {
    const int m = 1 + static_cast<int>(rng() % 6);
    Vec2 v(U(rng), U(rng));
    std::vector<Vec2> nv;
    std::vector<double> nw;
    double ex = 0, ey = 0;
    for (int j = 0; j < m; ++j) {
      nv.emplace_back(U(rng), U(rng));
      nw.push_back(W(rng));
      ex -= nw[j] * (v.x() - nv[j].x());
      ey -= nw[j] * (v.y() - nv[j].y());
    }
    const Vec2 c = consensus_control(v, nv, nw);
    REQUIRE(c.x() == doctest::Approx(ex).epsilon(1e-13));
    REQUIRE(c.y() == doctest::Approx(ey).epsilon(1e-13));
    std::vector<Vec2> scaled = nv;
    for (auto& s : scaled) s *= 3.0;
    REQUIRE((consensus_control(3.0 * v, scaled, nw) - 3.0 * c).norm() < 1e-12);
  }
}

TEST_CASE("consensus conserves momentum and contracts on a fixed graph") {
  const int n = 5;
  std::vector<Vec2> pos;
  for (int i = 0; i < n; ++i) pos.emplace_back(1.5 * std::cos(2 * kPi * i / n), 1.5 * std::sin(2 * kPi * i / n));
  const GraphWeights g = build_graph(pos, std::vector<bool>(n, true), ConnectivityParams{});
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> U(-1, 1);
  std::vector<AgentState> agents(n);
  for (int i = 0; i < n; ++i) {
    agents[i].position = pos[i];
    agents[i].velocity = Vec2(U(rng), U(rng));
  }
  auto total = [&] {
    Vec2 t = Vec2::Zero();
    for (const auto& a : agents) t += a.velocity;
    return t;
  };
  auto spread = [&] {
    double lo = 1e9, hi = -1e9;
    for (const auto& a : agents) {
      lo = std::min(lo, a.velocity.x());
      hi = std::max(hi, a.velocity.x());
    }
    return hi - lo;
  };
  const Vec2 start = total();
  double prev = spread();
  const Limits free{1e9, 1e9};
  for (int k = 0; k < 1000; ++k) {
    std::vector<AgentState> next = agents;
    for (int i = 0; i < n; ++i) {
      std::vector<Vec2> nv;
      std::vector<double> nw;
      for (int j = 0; j < n; ++j) {
        if (g(i, j) > 0.0) {
          nv.push_back(agents[j].velocity);
          nw.push_back(g(i, j));
        }
      }
      next[i] = step_agent(agents[i], consensus_control(agents[i].velocity, nv, nw), 0.05, free);
    }
    agents = next;
    REQUIRE((total() - start).cwiseAbs().maxCoeff() <= 1e-10);
    REQUIRE(spread() <= prev + 1e-15);
    prev = spread();
  }
  CHECK(prev < 1e-3);
}

}
