#include <benchmark/benchmark.h>

#include <cmath>

#include "biphoton/numerics.hpp"
#include "biphoton/one_photon.hpp"
#include "biphoton/two_photon.hpp"

namespace {

using namespace biphoton;

const CrystalParams kBbo(1.5, 56.85e-13, 56.14e-13, 54.30e-13);
const DelayLine kQuartz(51.25e-13, 51.59e-13);

PumpField fig4_pump() {
  return PumpField(PumpPulse(1.0, 1e-13), PumpPulse(1.0, 0.3e-13), 1.5e-13, kPi);
}

void BM_QuadratureOscillatory(benchmark::State& state) {
  QuadSpec spec;
  spec.rel_tol = 1e-10;
  const double w = static_cast<double>(state.range(0));
  for (auto _ : state) {
    const auto r = integrate_1d([w](double x) { return std::exp(-x * x) * std::cos(w * x); }, -8.0, 8.0, spec);
    benchmark::DoNotOptimize(r.value);
  }
}
BENCHMARK(BM_QuadratureOscillatory)->Arg(1)->Arg(20)->Arg(200);

void BM_RhoGaussian(benchmark::State& state) {
  const PumpField f = fig4_pump();
  for (auto _ : state) benchmark::DoNotOptimize(rho_gaussian(f, kBbo, 1.1e-13, {}).total());
}
BENCHMARK(BM_RhoGaussian);

void BM_RhoGeneric(benchmark::State& state) {
  const PumpField f = fig4_pump();
  for (auto _ : state) benchmark::DoNotOptimize(rho_two_pulse(f, kBbo, 1.1e-13, {}).total());
}
BENCHMARK(BM_RhoGeneric)->Unit(benchmark::kMillisecond);

void BM_Fig4Interferogram(benchmark::State& state) {
  const HomModel model(fig4_pump(), kBbo, {});
  const GridSpec grid = default_tau_l_grid(kBbo);
  const auto threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(interferogram(model, kQuartz, grid, threads).r_n.data());
}
BENCHMARK(BM_Fig4Interferogram)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_SpectrumCurve(benchmark::State& state) {
  const CrystalParams crystal(10.0, 56.85e-13, 56.14e-13, 54.30e-13);
  const PumpField f(PumpPulse(1.0, 1e-13), PumpPulse(1.0, 1e-13), 3e-13, 0.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(spectrum_curve(f, crystal, 1, GridSpec{-6e13, 6e13, 601}, {}).values.data());
  }
}
BENCHMARK(BM_SpectrumCurve)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
