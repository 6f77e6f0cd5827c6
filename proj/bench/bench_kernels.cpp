// Serial reference vs OpenMP kernels on the grid functionals.
// Arguments: cells per axis, then 0 = serial, 1 = parallel.

#include "rigidlab/experiments.hpp"
#include "rigidlab/functionals.hpp"
#include "rigidlab/piola_check.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace rigidlab;

namespace {

struct Setup {
  MetricField g, h;
  DiscreteMap f;
};

Setup make_setup(int cells) {
  const ChartGrid grid = ChartGrid::unit(2, cells + 1);
  MetricField g = sphere_conformal_metric(grid, 1.0);
  MetricField h = euclidean_metric(ChartGrid::box(Vec::Constant(2, -2.0), Vec::Constant(2, 3.0), 2));
  DiscreteMap f = DiscreteMap::sample(grid, [](const Vec& x) {
    Vec y = 1.1 * x;
    y(0) += 0.05 * std::sin(M_PI * x(0)) * std::sin(M_PI * x(1));
    return y;
  });
  return {std::move(g), std::move(h), std::move(f)};
}

EvalOptions opts_for(const benchmark::State& state) {
  EvalOptions o;
  o.exec = state.range(1) ? Exec::parallel : Exec::serial;
  return o;
}

void BM_ElasticEnergy(benchmark::State& state) {
  const Setup s = make_setup(static_cast<int>(state.range(0)));
  const EvalOptions o = opts_for(state);
  for (auto _ : state) benchmark::DoNotOptimize(elastic_energy(s.f, s.g, s.h, 2.0, o).energy);
  state.SetItemsProcessed(state.iterations() * s.f.source().cell_count());
}

void BM_EnergyGradient(benchmark::State& state) {
  const Setup s = make_setup(static_cast<int>(state.range(0)));
  const EvalOptions o = opts_for(state);
  for (auto _ : state) benchmark::DoNotOptimize(energy_gradient(s.f, s.g, s.h, 2.0, o).energy);
  state.SetItemsProcessed(state.iterations() * s.f.source().cell_count());
}

void BM_JacobianFunctional(benchmark::State& state) {
  const Setup s = make_setup(static_cast<int>(state.range(0)));
  const EvalOptions o = opts_for(state);
  for (auto _ : state) benchmark::DoNotOptimize(jacobian_functional(s.f, s.g, s.h, o));
  state.SetItemsProcessed(state.iterations() * s.f.source().cell_count());
}

void BM_PiolaStudy(benchmark::State& state) {
  const Exec exec = state.range(1) ? Exec::parallel : Exec::serial;
  const int cells = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_piola_study(PiolaCase::sphere_target, cells, 1, 42, exec).max_abs_residual);
  }
}

void grid_args(benchmark::internal::Benchmark* b) {
  for (int cells : {64, 256}) {
    for (int par : {0, 1}) b->Args({cells, par});
  }
  b->ArgNames({"cells", "parallel"})->Unit(benchmark::kMillisecond);
}

}  // namespace

BENCHMARK(BM_ElasticEnergy)->Apply(grid_args);
BENCHMARK(BM_EnergyGradient)->Apply(grid_args);
BENCHMARK(BM_JacobianFunctional)->Apply(grid_args);
BENCHMARK(BM_PiolaStudy)->Apply(grid_args);

BENCHMARK_MAIN();
