#include <benchmark/benchmark.h>

#include <numbers>

#include "vorhom/complex.hpp"
#include "vorhom/integrate.hpp"
#include "vorhom/scenario.hpp"
#include "vorhom/vortex.hpp"

using namespace vorhom;

namespace {

Point pt(double x, double y) { return (Vec(2) << x, y).finished(); }

void circulation_by_order(benchmark::State& state) {
  const VectorFieldSpec v = builtin("point_vortex").flow();
  const GeometricChain c = circle(pt(0, 0), 1.0, 1, 16);
  const int order = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(circulation(v, c, order));
}
BENCHMARK(circulation_by_order)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

void vorticity_flux_disc(benchmark::State& state) {
  const VectorFieldSpec v = builtin("rankine_vortex").flow();
  const GeometricChain d = disc(pt(0.1, 0.0), 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(vorticity_flux(v, d));
}
BENCHMARK(vorticity_flux_disc);

void betti_periodic_grid(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const CubicalComplex c = grid_complex({n, n, n}, {true, true, false});
  for (auto _ : state) benchmark::DoNotOptimize(betti_numbers(c));
}
BENCHMARK(betti_periodic_grid)->Arg(3)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void advect_loop(benchmark::State& state) {
  const VectorFieldSpec v = builtin("point_vortex").flow();
  const GeometricChain c = circle(pt(0, 0), 1.0, 1, 16);
  const AdvectionOptions opt{static_cast<int>(state.range(0)), 32, 8};
  for (auto _ : state) benchmark::DoNotOptimize(advect_chain(c, v, 0.0, 2.0 * std::numbers::pi, opt));
}
BENCHMARK(advect_loop)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void kelvin_point_vortex(benchmark::State& state) {
  const VectorFieldSpec v = builtin("point_vortex").flow();
  InvariantOptions opt;
  opt.advection = {256, 128, 8};
  for (auto _ : state) {
    benchmark::DoNotOptimize(kelvin_check(v, circle(pt(0, 0), 1.0, 1, 16), 0.0, 2.0 * std::numbers::pi, opt));
  }
}
BENCHMARK(kelvin_point_vortex)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
