#include <benchmark/benchmark.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "semiflow/lab/config.hpp"
#include "semiflow/lab/scenario.hpp"
#include "semiflow/selection.hpp"
#include "semiflow/solver.hpp"
#include "semiflow/spectral.hpp"

using namespace semiflow;
using namespace semiflow::lab;
using std::numbers::pi;
using X = std::array<double, 2>;

namespace {

ScalarField wavy(const TorusGrid& g) {
  return ScalarField::from_function(g, [](const X& x) { return 1.0 + 0.2 * std::sin(pi * x[0]) * std::cos(pi * x[1]); });
}

void BM_ForwardInverse(benchmark::State& state) {
  const TorusGrid g = TorusGrid::make(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const ScalarField f = wavy(g);
  for (auto _ : state) benchmark::DoNotOptimize(inverse_transform(g, forward_transform(f)));
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(g.size()));
}
BENCHMARK(BM_ForwardInverse)->Args({1, 256})->Args({1, 4096})->Args({2, 64})->Args({2, 256});

void BM_DealiasedDerivative(benchmark::State& state) {
  const TorusGrid g = TorusGrid::make(2, static_cast<int>(state.range(0)));
  const ScalarField f = wavy(g);
  for (auto _ : state) benchmark::DoNotOptimize(dealiased_derivative(f, 0));
}
BENCHMARK(BM_DealiasedDerivative)->Arg(64)->Arg(128);

void BM_SolverStep(benchmark::State& state) {
  const TorusGrid g = TorusGrid::make(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const FluidState init{wavy(g), VectorField(g)};
  SolverConfig cfg;
  cfg.eps = 1e-3;
  cfg.dt = 1e-3;
  cfg.t_end = 1e-2;
  cfg.sample_stride = 10;
  for (auto _ : state) benchmark::DoNotOptimize(integrate_system(init, cfg));
  state.SetItemsProcessed(state.iterations() * cfg.step_count());
}
BENCHMARK(BM_SolverStep)->Args({1, 256})->Args({2, 64})->Unit(benchmark::kMillisecond);

const Ensemble& smooth_ensemble() {
  static const Ensemble ens = [] {
    ScenarioConfig cfg = ScenarioConfig::load(std::filesystem::path(SEMIFLOW_CONFIG_DIR) / "smooth_wave.ini");
    cfg.n = 64;
    return build_ensemble(cfg).ensemble;
  }();
  return ens;
}

void BM_EnergyFunctional(benchmark::State& state) {
  const Ensemble& ens = smooth_ensemble();
  const KrylovFunctional I{1.0, FunctionalForm::energy, 0, Beta::for_energy(ens.data().E0)};
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_functional(I, ens.member(0), ens.horizon()));
}
BENCHMARK(BM_EnergyFunctional);

void BM_DensityFunctional(benchmark::State& state) {
  const Ensemble& ens = smooth_ensemble();
  const KrylovFunctional I{0.5, FunctionalForm::density_mode, 3, Beta::for_energy(ens.data().E0)};
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_functional(I, ens.member(0), ens.horizon()));
}
BENCHMARK(BM_DensityFunctional);

void BM_SelectionCascade(benchmark::State& state) {
  const Ensemble& ens = smooth_ensemble();
  const FunctionalSchedule schedule = FunctionalSchedule::enumerate(4, 4, 4);
  for (auto _ : state) benchmark::DoNotOptimize(semiflow_select(ens, schedule));
  state.counters["members"] = static_cast<double>(ens.size());
}
BENCHMARK(BM_SelectionCascade)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
