// Serial reference vs OpenMP for the grid kernels. Set HGEO_NUM_THREADS to
// pin the worker count of the parallel variants.

#include <benchmark/benchmark.h>

#include "hgeo/basis.hpp"
#include "hgeo/dynamics.hpp"
#include "hgeo/noise.hpp"
#include "hgeo/synthesis.hpp"

using namespace hgeo;

namespace {

Exec mode(const benchmark::State& s) { return s.range(0) ? Exec::Parallel : Exec::Serial; }

const PulseProfile& fast_quad() {
  static const PulseProfile p = synthesize_pulse(build_model("landau_zener", {{"x", 1.0}}), 2, 2, 0, -10, 10, 1024);
  return p;
}

void BM_SweepTf(benchmark::State& s) {
  const auto grid = linspace(0.2, 10, 32);
  for (auto _ : s) benchmark::DoNotOptimize(sweep_tf(fast_quad(), grid, 100.0, mode(s)));
}

void BM_PulseFamily(benchmark::State& s) {
  const auto np = linspace(0, 6, 13);
  for (auto _ : s) benchmark::DoNotOptimize(lz_pulse_family(np, 1.0, 10.0, 1024, mode(s)));
}

void BM_FilterFunctions(benchmark::State& s) {
  const auto f = log_frequency_grid(1e-2, 1e2, 50);
  for (auto _ : s) benchmark::DoNotOptimize(filter_functions(fast_quad(), 5.0, f, 2048, mode(s)));
}

void BM_QuasistaticMc(benchmark::State& s) {
  NoiseSpec spec;
  spec.sigma_x = 0.1;
  spec.samples = 64;
  for (auto _ : s) benchmark::DoNotOptimize(quasistatic_mc(fast_quad(), 5.0, spec, {}, mode(s)));
}

void BM_BuildBasis(benchmark::State& s) {
  const auto np = linspace(-2, 2, 9);
  for (auto _ : s) benchmark::DoNotOptimize(build_basis(np, 1.0, 10.0, kBasisGrid, mode(s)));
}

}  // namespace

BENCHMARK(BM_SweepTf)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PulseFamily)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FilterFunctions)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_QuasistaticMc)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BuildBasis)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
