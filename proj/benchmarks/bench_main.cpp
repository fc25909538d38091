#include <benchmark/benchmark.h>

#include "expgame/equilibrium.hpp"
#include "expgame/montecarlo.hpp"
#include "expgame/oracle.hpp"
#include "fixtures.hpp"

using namespace expgame;

static void BM_ClassifyThresholds(benchmark::State& state) {
  const GameParams g = fixtures::over();
  for (auto _ : state) benchmark::DoNotOptimize(classify(g));
}
BENCHMARK(BM_ClassifyThresholds);

static void BM_SolveUndercompetitive(benchmark::State& state) {
  const GameParams g = fixtures::under();
  for (auto _ : state) benchmark::DoNotOptimize(solve_undercompetitive(g).p_dagger());
}
BENCHMARK(BM_SolveUndercompetitive);

static void BM_FirstBestDP(benchmark::State& state) {
  const GameParams g = fixtures::lump();
  GridSpec grid;
  grid.n_points = static_cast<int>(state.range(0));
  grid.order = state.range(1) ? SweepOrder::Jacobi : SweepOrder::GaussSeidel;
  for (auto _ : state) benchmark::DoNotOptimize(dp_first_best(g, grid).residual);
}
BENCHMARK(BM_FirstBestDP)->Args({501, 0})->Args({2001, 0})->Args({501, 1})->Unit(benchmark::kMillisecond);

static void BM_VerifyMpe(benchmark::State& state) {
  const GameParams g = fixtures::under();
  const UndercompEq eq = solve_undercompetitive(g);
  const GridSpec grid;
  std::vector<double> profile;
  for (double p : belief_grid(grid.n_points)) profile.push_back(eq.effort(p));
  for (auto _ : state) benchmark::DoNotOptimize(verify_mpe(g, profile, grid).max_deviation_gain);
}
BENCHMARK(BM_VerifyMpe)->Unit(benchmark::kMillisecond);

static void BM_MonteCarlo(benchmark::State& state) {
  const GameParams g = fixtures::eff();
  SimConfig cfg;
  cfg.reps = state.range(0);
  cfg.threads = 1;
  const auto profile = StrategyProfile::cutoff(2, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(simulate(g, profile, cfg).mean);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MonteCarlo)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
