#include <benchmark/benchmark.h>

#include <random>

#include "imro/prox.hpp"

namespace {

using namespace imro;

struct ProxInstance {
  RankOneMetric metric;
  Vector xc;
};

ProxInstance make_instance(Index n) {
  std::mt19937_64 rng(42 + static_cast<std::uint64_t>(n));
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector dir(n), xc(n);
  for (Index i = 0; i < n; ++i) {
    dir[i] = gauss(rng);
    xc[i] = 2.0 * gauss(rng);
  }
  dir.normalize();
  const double sigma = 2.0;
  return ProxInstance{RankOneMetric(sigma, Vector(std::sqrt(0.9 * sigma) * dir)),
                      std::move(xc)};
}

void BM_ProxSorted(benchmark::State& state) {
  const Index n = state.range(0);
  ProxInstance inst = make_instance(n);
  for (auto _ : state) {
    ProxResult r = prox_imro(inst.metric, inst.xc, 0.3, ProxMethod::kSorted);
    benchmark::DoNotOptimize(r.mu);
  }
  state.SetComplexityN(n);
}

void BM_ProxMedian(benchmark::State& state) {
  const Index n = state.range(0);
  ProxInstance inst = make_instance(n);
  for (auto _ : state) {
    ProxResult r = prox_imro(inst.metric, inst.xc, 0.3, ProxMethod::kMedian);
    benchmark::DoNotOptimize(r.mu);
  }
  state.SetComplexityN(n);
}

void BM_Shrink(benchmark::State& state) {
  const Index n = state.range(0);
  ProxInstance inst = make_instance(n);
  for (auto _ : state) {
    Vector s = shrink(inst.xc, 0.3);
    benchmark::DoNotOptimize(s.data());
  }
}

}  // namespace

BENCHMARK(BM_ProxSorted)->RangeMultiplier(2)->Range(1 << 8, 1 << 14)
    ->Complexity(benchmark::oNLogN);
BENCHMARK(BM_ProxMedian)->RangeMultiplier(2)->Range(1 << 8, 1 << 14)
    ->Complexity(benchmark::oN);
BENCHMARK(BM_Shrink)->Arg(1 << 12);

BENCHMARK_MAIN();
