#include <benchmark/benchmark.h>

#include "cnk/problems/brown.hpp"
#include "cnk/problems/linear.hpp"
#include "cnk/rng.hpp"
#include "cnk/selection.hpp"
#include "cnk/solvers.hpp"

namespace {

using namespace cnk;

RowGeometry random_geometry(Index m, std::uint64_t seed) {
  Rng rng(seed);
  Vector r(m), g(m);
  for (Index i = 0; i < m; ++i) {
    r[i] = rng.normal();
    g[i] = 0.1 + rng.uniform();
  }
  return RowGeometry::from(std::move(r), std::move(g));
}

void BM_DistanceSet(benchmark::State& state) {
  const RowGeometry g = random_geometry(state.range(0), 1);
  const double eps = compute_epsilon(g, ThresholdMode::convex(0.5));
  for (auto _ : state) benchmark::DoNotOptimize(build_distance_set(g, eps));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DistanceSet)->RangeMultiplier(4)->Range(64, 16384)->Complexity();

void BM_ResidualSet(benchmark::State& state) {
  const RowGeometry g = random_geometry(state.range(0), 2);
  const double delta = compute_delta(g, state.range(0), ThresholdMode::convex(0.5));
  for (auto _ : state) benchmark::DoNotOptimize(build_residual_set(g, delta));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ResidualSet)->RangeMultiplier(4)->Range(64, 16384)->Complexity();

void BM_BlockStep(benchmark::State& state) {
  const Index rows = state.range(0);
  const LinearProblem p = make_random_consistent_linear(rows, 50, 3);
  IndexList tau(static_cast<std::size_t>(rows));
  for (Index i = 0; i < rows; ++i) tau[static_cast<std::size_t>(i)] = i;
  const Vector x = Vector::Zero(50);
  for (auto _ : state) benchmark::DoNotOptimize(block_step(x, tau, p));
}
BENCHMARK(BM_BlockStep)->Arg(1)->Arg(10)->Arg(50)->Arg(100);

void BM_SolveBrown(benchmark::State& state, MethodKind method) {
  const Index n = state.range(0);
  const BrownProblem p(n);
  SolverConfig c;
  c.method = method;
  c.seed = 7;
  const Vector x0 = Vector::Constant(n, 0.5);
  std::int64_t iterations = 0;
  for (auto _ : state) {
    const SolveTrace t = solve(p, x0, c);
    iterations = t.total_iterations;
    benchmark::DoNotOptimize(t.final_x.data());
  }
  state.counters["IT"] = static_cast<double>(iterations);
}
BENCHMARK_CAPTURE(BM_SolveBrown, nrk, MethodKind::NRK)->Arg(50)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_SolveBrown, dr_cnk, MethodKind::DR_CNK)->Arg(50)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_SolveBrown, rd_cnk, MethodKind::RD_CNK)->Arg(50)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_SolveBrown, db_cnk, MethodKind::DB_CNK)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_SolveBrown, rb_cnk, MethodKind::RB_CNK)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
