// Serial reference vs OpenMP path for the hot kernels.

#include <random>

#include <benchmark/benchmark.h>

#include "bcg/hyperbolic.hpp"
#include "bcg/kernels.hpp"
#include "bcg/measure.hpp"

namespace {

using namespace bcg;

void moments_kernel(benchmark::State& state, Exec exec) {
  const SpaceModel m = SpaceModel::sl4();
  const auto n = static_cast<int>(state.range(0));
  const auto pts = haar_sample(4, n, 1);
  std::vector<double> w(pts.size(), 1.0 / n);
  for (auto _ : state) {
    MomentSums s = accumulate_moments(m, pts, w, exec);
    benchmark::DoNotOptimize(s.q1.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}

void sigma_kernel(benchmark::State& state, Exec exec) {
  SigmaOptions opt;
  opt.grid_n = static_cast<int>(state.range(0));
  opt.exec = exec;
  const DiskPoint y(0.3, -0.2);
  for (auto _ : state) {
    CircleMeasure c = sigma_density(y, 1.5, opt);
    benchmark::DoNotOptimize(c.density.data());
  }
}

void trace_pairs(benchmark::State& state, Exec exec) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> d;
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<Matrix> a(n);
  for (auto& x : a) {
    x = Matrix::NullaryExpr(9, 9, [&] { return d(rng); });
    x = (x + x.transpose()).eval();
  }
  std::vector<double> w(n, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(trace_pair_sum(a, w, a, w, exec));
}

void BM_MomentsSerial(benchmark::State& s) { moments_kernel(s, Exec::serial); }
void BM_MomentsParallel(benchmark::State& s) { moments_kernel(s, Exec::parallel); }
void BM_SigmaSerial(benchmark::State& s) { sigma_kernel(s, Exec::serial); }
void BM_SigmaParallel(benchmark::State& s) { sigma_kernel(s, Exec::parallel); }
void BM_TracePairsSerial(benchmark::State& s) { trace_pairs(s, Exec::serial); }
void BM_TracePairsParallel(benchmark::State& s) { trace_pairs(s, Exec::parallel); }

}  // namespace

BENCHMARK(BM_MomentsSerial)->Arg(1000)->Arg(100000);
BENCHMARK(BM_MomentsParallel)->Arg(1000)->Arg(100000);
BENCHMARK(BM_SigmaSerial)->Arg(64)->Arg(256);
BENCHMARK(BM_SigmaParallel)->Arg(64)->Arg(256);
BENCHMARK(BM_TracePairsSerial)->Arg(200);
BENCHMARK(BM_TracePairsParallel)->Arg(200);

BENCHMARK_MAIN();
