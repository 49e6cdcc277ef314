#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "thinfilm/kernels.hpp"

using namespace thinfilm;

namespace {

struct Setup {
  Grid grid;
  ModelParams params;
  std::vector<double> u, u_old;

  explicit Setup(int N) : grid(1.0, N) {
    params.n = 1.5;
    params.m = 1.2;
    params.A = 0.3;
    params.M = 2.5;
    params.eps = 1e-6;
    for (int i = 0; i < N; ++i) {
      const double x = grid.center(i);
      u.push_back(1.0 + 0.3 * std::cos(3.0 * x));
      u_old.push_back(1.0 + 0.3 * std::cos(3.0 * x + 0.01));
    }
  }
};

void BM_ResidualOmp(benchmark::State& state) {
  const Setup s(static_cast<int>(state.range(0)));
  std::vector<double> r(s.u.size());
  for (auto _ : state) {
    kernels::omp::assemble_residual(s.u, s.u_old, 1e-4, s.grid, s.params, r);
    benchmark::DoNotOptimize(r.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_ResidualSerial(benchmark::State& state) {
  const Setup s(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto r = kernels::serial::assemble_residual(s.u, s.u_old, 1e-4, s.grid, s.params);
    benchmark::DoNotOptimize(r.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_FaceGradients(benchmark::State& state) {
  const Setup s(static_cast<int>(state.range(0)));
  std::vector<kernels::FaceGradient> g(s.grid.interior_faces());
  for (auto _ : state) {
    kernels::omp::face_gradients(s.u, s.grid, s.params, g);
    benchmark::DoNotOptimize(g.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

} // namespace

BENCHMARK(BM_ResidualOmp)->RangeMultiplier(4)->Range(256, 1 << 16);
BENCHMARK(BM_ResidualSerial)->RangeMultiplier(4)->Range(256, 1 << 16);
BENCHMARK(BM_FaceGradients)->RangeMultiplier(4)->Range(256, 1 << 16);

BENCHMARK_MAIN();
