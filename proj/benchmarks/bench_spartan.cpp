#include <benchmark/benchmark.h>

#include "spartan/bessel.hpp"
#include "spartan/closed_form.hpp"
#include "spartan/simulate.hpp"
#include "spartan/spectral.hpp"

using namespace spartan;

namespace {

void BM_CovarianceQuadrature(benchmark::State& state) {
  const Dim d = dim_from_int(static_cast<int>(state.range(0)));
  const ModelParams p = params_from_xc(1.0, 0.5, 1.0, Band::finite(20.0));
  double r = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(covariance_quadrature(p, d, 1.0 + r));
    r = r < 5.0 ? r + 0.01 : 0.0;
  }
}
BENCHMARK(BM_CovarianceQuadrature)->Arg(1)->Arg(2)->Arg(3);

void BM_ClosedFormAutocorrelation(benchmark::State& state) {
  const double eta1 = static_cast<double>(state.range(0));
  double h = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rho1(NormalizedLag(h), eta1));
    benchmark::DoNotOptimize(rho3(NormalizedLag(h), eta1));
    h = h < 10.0 ? h + 0.01 : 0.0;
  }
}
BENCHMARK(BM_ClosedFormAutocorrelation)->Arg(-1)->Arg(2)->Arg(5);

void BM_BesselJ0(benchmark::State& state) {
  double z = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bessel_j0(z));
    z = z < 100.0 ? z + 0.137 : 0.0;
  }
}
BENCHMARK(BM_BesselJ0);

void BM_SamplePath(benchmark::State& state) {
  const ModelParams p = params_from_xc(1.0, 2.0, 1.0, Band::finite(10.0));
  const GridSpec grid{0.0, 0.1, static_cast<std::size_t>(state.range(0))};
  std::uint64_t seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(sample_path_1d(p, grid, seed++, 4096));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SamplePath)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
