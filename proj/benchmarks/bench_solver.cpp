#include <benchmark/benchmark.h>

#include <random>

#include "imro/baselines.hpp"
#include "imro/problems.hpp"
#include "imro/solver.hpp"

namespace {

using namespace imro;

ProblemBundle desk_instance() {
  GenOptions opt;
  opt.sparsity = 12;
  opt.lambda = 0.3;
  opt.seed = 7;
  return gen_gaussian(120, 480, opt);
}

void BM_SolveImro1d(benchmark::State& state) {
  ProblemBundle bundle = desk_instance();
  const NormEstimate norm = operator_norm(*bundle.problem.A);
  for (auto _ : state) {
    SolverConfig cfg;
    cfg.variant = Variant::kImro1d;
    cfg.tol = 1e-6;
    cfg.norm = norm;
    SolveResult res = solve(bundle.problem, cfg);
    benchmark::DoNotOptimize(res.x.data());
  }
}

void BM_SolveImro2d(benchmark::State& state) {
  ProblemBundle bundle = desk_instance();
  const NormEstimate norm = operator_norm(*bundle.problem.A);
  for (auto _ : state) {
    SolverConfig cfg;
    cfg.variant = Variant::kImro2d;
    cfg.tol = 1e-6;
    cfg.norm = norm;
    SolveResult res = solve(bundle.problem, cfg);
    benchmark::DoNotOptimize(res.x.data());
  }
}

void BM_SolveFista(benchmark::State& state) {
  ProblemBundle bundle = desk_instance();
  const NormEstimate norm = operator_norm(*bundle.problem.A);
  for (auto _ : state) {
    FirstOrderConfig cfg;
    cfg.tol = 1e-6;
    cfg.norm = norm;
    SolveResult res =
        fista_solve(bundle.problem, cfg, Vector::Zero(bundle.problem.cols()));
    benchmark::DoNotOptimize(res.x.data());
  }
}

void BM_Metric2d(benchmark::State& state) {
  ProblemBundle bundle = desk_instance();
  const NormEstimate norm = operator_norm(*bundle.problem.A);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector g(480), d(480);
  for (Index i = 0; i < 480; ++i) {
    g[i] = gauss(rng);
    d[i] = gauss(rng);
  }
  for (auto _ : state) {
    RankOneMetric m = metric_2d(*bundle.problem.A, norm.safe_upper(), g, d);
    benchmark::DoNotOptimize(m.sigma());
  }
}

}  // namespace

BENCHMARK(BM_SolveImro1d)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SolveImro2d)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SolveFista)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Metric2d)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
