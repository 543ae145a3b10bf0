// Microbenchmarks comparing the OpenMP row-parallel kernels against the serial
// reference paths: stencil assembly (1D and 3D) and the residual kernel.
#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "starcol/assembly.hpp"
#include "starcol/cloud.hpp"
#include "starcol/linalg.hpp"

using namespace starcol;

namespace {

StencilConfig bar_config(ExecPolicy exec) {
  StencilConfig cfg;
  cfg.scheme = Scheme::FPM;
  cfg.n = 20;
  cfg.basis.dimension = 1;
  cfg.approx.coord = CoordMode::Global;
  cfg.approx.eval = EvalMode::LegacyLast;
  cfg.approx.rcond_floor = 0.0;
  cfg.exec = exec;
  return cfg;
}

StencilConfig beam_config(ExecPolicy exec) {
  StencilConfig cfg;
  cfg.scheme = Scheme::FPM;
  cfg.n = 30;
  cfg.basis.dimension = 3;
  cfg.approx.coord = CoordMode::Centered;
  cfg.approx.eval = EvalMode::Star;
  cfg.approx.rcond_floor = 1e-14;
  cfg.exec = exec;
  return cfg;
}

void BM_AssembleBar1D(benchmark::State& state) {
  NodeCloud cloud = generate_grid_1d(99.0, 100);
  Material mat = make_material(200000.0, 0.33);
  StencilConfig cfg = bar_config(static_cast<ExecPolicy>(state.range(0)));
  for (auto _ : state) {
    LinearSystem sys = assemble_bar_1d(cloud, mat, cfg);
    benchmark::DoNotOptimize(sys.K.data());
  }
}

void BM_AssembleNavier3D(benchmark::State& state) {
  NodeCloud cloud = generate_grid_3d(3, 3, 20, 1.0, {1.0, 1.0, 1.0});
  Material mat = make_material(200000.0, 0.33);
  StencilConfig cfg = beam_config(static_cast<ExecPolicy>(state.range(0)));
  for (auto _ : state) {
    LinearSystem sys = assemble_navier_3d(cloud, mat, cfg);
    benchmark::DoNotOptimize(sys.K.data());
  }
}

void BM_Residual(benchmark::State& state) {
  const int n = 1500;
  DenseMatrix K(n, n);
  std::vector<double> u(n), f(n);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) K(i, j) = dist(rng);
  for (int i = 0; i < n; ++i) {
    u[i] = dist(rng);
    f[i] = dist(rng);
  }
  ExecPolicy exec = static_cast<ExecPolicy>(state.range(0));
  for (auto _ : state) {
    std::vector<double> r = linalg::residual(K, u, f, exec);
    benchmark::DoNotOptimize(r.data());
  }
}

void policy_args(benchmark::internal::Benchmark* b) {
  b->Arg(static_cast<int>(ExecPolicy::Serial))->Arg(static_cast<int>(ExecPolicy::Parallel));
  b->ArgName("policy");
}

BENCHMARK(BM_AssembleBar1D)->Apply(policy_args);
BENCHMARK(BM_AssembleNavier3D)->Apply(policy_args);
BENCHMARK(BM_Residual)->Apply(policy_args);

}  // namespace

BENCHMARK_MAIN();
