#include <benchmark/benchmark.h>

#include <vector>

#include "weldlab/capacity.hpp"
#include "weldlab/circle_homeo.hpp"
#include "weldlab/equivariant.hpp"
#include "weldlab/kernels.hpp"
#include "weldlab/polygon.hpp"
#include "weldlab/zipper.hpp"

using namespace weldlab;

static std::vector<double> angles(int n) {
  std::vector<double> t(n);
  for (int k = 0; k < n; ++k) t[k] = kTwoPi * (k + 0.25 * (k % 3)) / n;
  return t;
}

static void BM_PairEnergy(benchmark::State& state) {
  const auto t = angles(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::normalized_pair_energy(t));
}
static void BM_PairEnergySerial(benchmark::State& state) {
  const auto t = angles(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::normalized_pair_energy_serial(t));
}
BENCHMARK(BM_PairEnergy)->Arg(512)->Arg(4096);
BENCHMARK(BM_PairEnergySerial)->Arg(512)->Arg(4096);

static void BM_CellMatrix(benchmark::State& state) {
  const auto cells = arc_cells(ArcSet::full_circle(), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::cell_kernel_matrix(cells));
}
static void BM_CellMatrixSerial(benchmark::State& state) {
  const auto cells = arc_cells(ArcSet::full_circle(), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::cell_kernel_matrix_serial(cells));
}
BENCHMARK(BM_CellMatrix)->Arg(256)->Arg(512);
BENCHMARK(BM_CellMatrixSerial)->Arg(256)->Arg(512);

static std::vector<Complex> square_points(int n) {
  const PolygonCurve P({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  std::vector<Complex> z;
  for (const auto& p : sample_boundary(P, n, Grading::interior)) z.push_back(P.point(p));
  return z;
}

static void BM_Unzip(benchmark::State& state) {
  const auto z = square_points(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(unzip(z));
}
static void BM_UnzipSerial(benchmark::State& state) {
  const auto z = square_points(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(unzip_serial(z));
}
BENCHMARK(BM_Unzip)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_UnzipSerial)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

static void BM_Residual(benchmark::State& state) {
  const EquivariantResult r = build_equivariant(EquivariantSpec{});
  const SampleGrid g(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(functional_equation_residual(r.W, r.sigma(), r.tau(), g));
  }
}
static void BM_ResidualSerial(benchmark::State& state) {
  const EquivariantResult r = build_equivariant(EquivariantSpec{});
  const SampleGrid g(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(functional_equation_residual_serial(r.W, r.sigma(), r.tau(), g));
  }
}
BENCHMARK(BM_Residual)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ResidualSerial)->Arg(10000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
