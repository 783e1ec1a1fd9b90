#include <random>

#include <benchmark/benchmark.h>

#include "flockrl/connectivity.hpp"
#include "flockrl/critic.hpp"
#include "flockrl/lq.hpp"
#include "flockrl/scenario.hpp"
#include "flockrl/separation.hpp"
#include "flockrl/sim.hpp"

using namespace flockrl;

static void BM_rls_update(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> U(-1, 1);
  std::vector<Theta> phis(256);
  for (auto& p : phis)
    for (int i = 0; i < kThetaSize; ++i) p(i) = U(rng);
  RlsState s = make_rls(Theta::Zero(), 100.0);
  std::size_t n = 0;
  for (auto _ : state) {
    s = rls_update(s, phis[n++ % phis.size()], 1.0);
    benchmark::DoNotOptimize(s.theta.data());
    if (n % 1000 == 0) s = make_rls(Theta::Zero(), 100.0);
  }
}
BENCHMARK(BM_rls_update);

static void BM_build_graph(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> U(-5, 5);
  std::vector<Vec2> pos;
  for (int i = 0; i < n; ++i) pos.emplace_back(U(rng), U(rng));
  const std::vector<bool> alive(n, true);
  const ConnectivityParams p;
  for (auto _ : state) benchmark::DoNotOptimize(build_graph(pos, alive, p));
  state.SetComplexityN(n);
}
BENCHMARK(BM_build_graph)->RangeMultiplier(2)->Range(10, 160)->Complexity(benchmark::oNSquared);

static void BM_ts_infer(benchmark::State& state) {
  const FuzzyRuleBase rules = default_rule_base(2.0, 2.0);
  double d = -3.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ts_infer(d, rules));
    d = d > 3.0 ? -3.0 : d + 0.001;
  }
}
BENCHMARK(BM_ts_infer);

static void BM_flock_scenario(benchmark::State& state) {
  const Scenario sc = default_flock_scenario();
  for (auto _ : state) benchmark::DoNotOptimize(run(sc));
  state.SetItemsProcessed(state.iterations() * sc.steps());
}
BENCHMARK(BM_flock_scenario)->Unit(benchmark::kMillisecond);

static void BM_policy_iteration(benchmark::State& state) {
  const Scenario sc = default_lq_scenario();
  for (auto _ : state) benchmark::DoNotOptimize(run_lq(sc, Solver::PI));
}
BENCHMARK(BM_policy_iteration)->Unit(benchmark::kMicrosecond);

static void BM_value_iteration(benchmark::State& state) {
  const Scenario sc = default_lq_scenario();
  for (auto _ : state) benchmark::DoNotOptimize(run_lq(sc, Solver::VI));
}
BENCHMARK(BM_value_iteration)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
