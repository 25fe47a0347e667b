#include <benchmark/benchmark.h>

#include "pseudolap/specfun.hpp"

namespace sf = pseudolap::specfun;
using pseudolap::Complex;

static void BM_Gamma(benchmark::State& state) {
  Complex z(3.3, -7.1);
  for (auto _ : state) benchmark::DoNotOptimize(sf::gamma(z));
}
BENCHMARK(BM_Gamma);

static void BM_ZetaCriticalLine(benchmark::State& state) {
  const Complex z(0.5, static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sf::zeta(z));
}
BENCHMARK(BM_ZetaCriticalLine)->Arg(1)->Arg(14)->Arg(45);

static void BM_CompletedXi(benchmark::State& state) {
  const Complex u(0.8, 3.0);
  for (auto _ : state) benchmark::DoNotOptimize(sf::completed_xi(u));
}
BENCHMARK(BM_CompletedXi);

static void BM_BesselKImaginaryOrder(benchmark::State& state) {
  const Complex nu(0.0, static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sf::bessel_k(nu, 3.0));
}
BENCHMARK(BM_BesselKImaginaryOrder)->Arg(1)->Arg(10)->Arg(40);

static void BM_BesselKRealOrder(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(sf::bessel_k(0.3, 2.0));
}
BENCHMARK(BM_BesselKRealOrder);
