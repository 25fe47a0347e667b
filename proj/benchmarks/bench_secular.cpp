#include <benchmark/benchmark.h>

#include "pseudolap/models.hpp"
#include "pseudolap/oracle.hpp"
#include "pseudolap/secular.hpp"
#include "pseudolap/systole.hpp"

using namespace pseudolap;

static void BM_RealBranchBetaOne(benchmark::State& state) {
  const auto m = builtin_model("synthetic-beta1");
  for (auto _ : state) benchmark::DoNotOptimize(real_branch_roots(*m.scattering, {10.0}, 0.5, 1.0));
}
BENCHMARK(BM_RealBranchBetaOne)->Unit(benchmark::kMillisecond);

static void BM_RealBranchModular(benchmark::State& state) {
  const auto m = builtin_model("modular");
  for (auto _ : state) benchmark::DoNotOptimize(real_branch_roots(*m.scattering, {10.0}, 0.5, 1.0));
}
BENCHMARK(BM_RealBranchModular)->Unit(benchmark::kMillisecond);

static void BM_CriticalLine(benchmark::State& state) {
  const auto m = builtin_model("modular");
  const double t_max = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(critical_line_roots(*m.scattering, {10.0}, 1e-6, t_max));
}
BENCHMARK(BM_CriticalLine)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_BranchSweep(benchmark::State& state) {
  const auto m = builtin_model("synthetic-beta1");
  for (auto _ : state) benchmark::DoNotOptimize(branch_sweep(*m.scattering, {1.0}, 5.0, 500.0, 40, 0));
}
BENCHMARK(BM_BranchSweep)->Unit(benchmark::kMillisecond);

static void BM_CountBelowTwin(benchmark::State& state) {
  const auto m = builtin_model("synthetic-twin");
  for (auto _ : state) benchmark::DoNotOptimize(count_below(m, {50.0, 50.0}));
}
BENCHMARK(BM_CountBelowTwin)->Unit(benchmark::kMillisecond);

static void BM_DiscLambda0(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(hyperbolic_disc_lambda0(2.0 * kPi));
}
BENCHMARK(BM_DiscLambda0)->Unit(benchmark::kMillisecond);

static void BM_VerificationSuite(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(run_verification_suite());
}
BENCHMARK(BM_VerificationSuite)->Unit(benchmark::kMillisecond);
