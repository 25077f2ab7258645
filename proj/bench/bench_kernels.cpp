// Serial reference vs OpenMP kernels.
#include <benchmark/benchmark.h>

#include "csgap/assignment_search.hpp"
#include "csgap/experiments.hpp"
#include "csgap/formulas.hpp"
#include "csgap/learners.hpp"
#include "csgap/rng.hpp"

using namespace csgap;

namespace {

Formula bench_formula(int n) {
  FormulaSourceConfig cfg;
  cfg.n = n;
  cfg.m = 6 * n;
  cfg.seed = 42;
  return sample_formula(cfg, ClauseKind::Maj);
}

Sample bench_sample(int n, int m) {
  Rng rng(7);
  Sample s(n, 3);
  for (int i = 0; i < m; ++i) s.add(uniform_exactly3(rng, n), rng.sign());
  return s;
}

void BM_FormulaValueSerial(benchmark::State& st) {
  const auto phi = bench_formula(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(formula_value_serial(phi));
}

void BM_FormulaValueParallel(benchmark::State& st) {
  const auto phi = bench_formula(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(formula_value(phi));
}

void BM_ErmSerial(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const auto s = formula_to_sample(bench_formula(n), 1);
  for (auto _ : st) benchmark::DoNotOptimize(erm_binary_halfspace_serial(s, n));
}

void BM_ErmParallel(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const auto s = formula_to_sample(bench_formula(n), 1);
  for (auto _ : st) benchmark::DoNotOptimize(erm_binary_halfspace(s, n));
}

void BM_LearnH3(benchmark::State& st) {
  const auto s = bench_sample(24, static_cast<int>(st.range(0)));
  LearnerConfig cfg;
  cfg.policy = st.range(1) ? ExecutionPolicy::Parallel : ExecutionPolicy::Serial;
  for (auto _ : st) benchmark::DoNotOptimize(learn_h3(s, cfg));
  st.SetLabel(st.range(1) ? "parallel" : "serial");
}

}  // namespace

BENCHMARK(BM_FormulaValueSerial)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FormulaValueParallel)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ErmSerial)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ErmParallel)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LearnH3)->Args({11520, 0})->Args({11520, 1})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
