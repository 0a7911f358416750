#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "statsol/correlation.hpp"
#include "statsol/ensemble.hpp"
#include "statsol/rng.hpp"
#include "statsol/solver.hpp"
#include "statsol/transport.hpp"

namespace {

using namespace statsol;

GridLayout unit_torus(std::size_t cells) { return GridLayout{Domain{0.0, 1.0, true}, cells}; }

GridFunction sine_profile(std::size_t cells) {
  return GridFunction::sample(unit_torus(cells), [](double x) {
    return 0.5 * std::sin(2.0 * std::numbers::pi * x);
  });
}

void BM_godunov_step(benchmark::State& state) {
  const auto model = burgers_flux();
  GridFunction u = sine_profile(static_cast<std::size_t>(state.range(0)));
  const double dt = 0.9 * u.dx() / 0.5;
  for (auto _ : state) {
    u = step(u, model, dt);
    benchmark::DoNotOptimize(u);
  }
}
BENCHMARK(BM_godunov_step)->Arg(256)->Arg(1024)->Arg(4096);

void BM_hungarian(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  RandomStream stream(7);
  CostMatrix cost(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) cost.at(i, j) = stream.uniform(0.0, 1.0);
  }
  for (auto _ : state) {
    auto result = hungarian(cost);
    benchmark::DoNotOptimize(result);
  }
}
BENCHMARK(BM_hungarian)->Arg(32)->Arg(128)->Arg(512);

void BM_w1_ensembles(benchmark::State& state) {
  const auto members = static_cast<std::size_t>(state.range(0));
  const auto layout = unit_torus(128);
  const auto a = sample_gaussian(brownian_kernel(), layout, members, 1);
  const auto b = sample_gaussian(brownian_kernel(), layout, members, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(w1_ensembles(a, b));
  }
}
BENCHMARK(BM_w1_ensembles)->Arg(16)->Arg(64)->Arg(128);

void BM_structure_function(benchmark::State& state) {
  const auto cells = static_cast<std::size_t>(state.range(0));
  const auto ensemble = Ensemble({sine_profile(cells)});
  for (auto _ : state) {
    benchmark::DoNotOptimize(structure_function(ensemble, 0.05, 1.0));
  }
}
BENCHMARK(BM_structure_function)->Arg(256)->Arg(1024);

void BM_sample_gaussian(benchmark::State& state) {
  const auto cells = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_gaussian(brownian_kernel(), unit_torus(cells), 64, 11));
  }
}
BENCHMARK(BM_sample_gaussian)->Arg(64)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
