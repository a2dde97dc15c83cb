#include "ocdens/bordered_band.hpp"
#include "ocdens/bvp_system.hpp"
#include "ocdens/kde.hpp"
#include "ocdens/newton.hpp"
#include "ocdens/partition.hpp"

#include <benchmark/benchmark.h>

#include <vector>

namespace {

using namespace ocdens;

SampleSet synthetic(std::size_t n)
{
  return from_unit_interval(sample_truncated_normal(n, 0.5, 0.01, 42));
}

void BM_Solve(benchmark::State& state)
{
  const SampleSet s = synthetic(static_cast<std::size_t>(state.range(0)));
  const Partition grid = build_partition(s, 1.0 / 2000);
  ModelParams p;
  for (auto _ : state) {
    const SolveOutcome o = solve(s, grid, p, SolverConfig{});
    benchmark::DoNotOptimize(o.solution.gamma);
  }
  state.counters["L"] = static_cast<double>(grid.L());
}
BENCHMARK(BM_Solve)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_AssembleAndFactor(benchmark::State& state)
{
  const SampleSet s = synthetic(1000);
  const Partition grid = build_partition(s, 1.0 / 2000);
  ModelParams p;
  const StateVector y = initial_guess(s, grid, p);
  const std::size_t size = 3 * grid.L() + 4;
  const bool factor = state.range(0) != 0;
  for (auto _ : state) {
    BorderedBandMatrix m(size, 4, 3);
    assemble_newton_matrix(y, grid, p, Scheme::trapezoid, m);
    if (factor)
      m.factorize();
    benchmark::ClobberMemory();
  }
}
BENCHMARK(BM_AssembleAndFactor)->ArgName("factorize")->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_Residual(benchmark::State& state)
{
  const SampleSet s = synthetic(1000);
  const Partition grid = build_partition(s, 1.0 / 2000);
  ModelParams p;
  const StateVector y = initial_guess(s, grid, p);
  for (auto _ : state) {
    const ResidualReport r = residual(y, grid, p, Scheme::trapezoid);
    benchmark::DoNotOptimize(r.inf_norm);
  }
}
BENCHMARK(BM_Residual)->Unit(benchmark::kMicrosecond);

void BM_Kde(benchmark::State& state)
{
  const RawSamples raw = sample_truncated_normal(static_cast<std::size_t>(state.range(0)), 0.5, 0.01, 42);
  const std::vector<double> grid = linspace(0.0, 1.0, 2001);
  for (auto _ : state) {
    const KdeEstimate est = kde_gaussian(raw, 0.05, grid);
    benchmark::DoNotOptimize(est.f.data());
  }
}
BENCHMARK(BM_Kde)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
