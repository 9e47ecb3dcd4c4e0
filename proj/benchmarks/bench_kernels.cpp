// This file is part of vortexpair.
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "vortexpair/dynamics.hpp"
#include "vortexpair/observables.hpp"
#include "vortexpair/specfun.hpp"
#include "vortexpair/sweep.hpp"

namespace {

using namespace vortexpair;

void BM_Faddeeva(benchmark::State& state) {
  std::complex<double> z(1.3, 0.7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(specfun::faddeeva(z));
    z += std::complex<double>(1e-9, 1e-9);
  }
}
BENCHMARK(BM_Faddeeva);

void BM_GaussTimeIntegral(benchmark::State& state) {
  double t = 5.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(dynamics::gauss_time_integral(t, {0.5, 0.3}, 1.2));
    t += 1e-9;
  }
}
BENCHMARK(BM_GaussTimeIntegral);

void BM_ChannelWeightNa(benchmark::State& state) {
  const auto cfg = harness::default_config("Na-3p3s");
  const auto packet = cfg.make_packet();
  const auto norm = photon::normalize(packet);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        dynamics::channel_weights(cfg.atom, packet, norm, cfg.m_e, 10.0, 1e-7));
  }
}
BENCHMARK(BM_ChannelWeightNa);

void BM_PairProbabilityH(benchmark::State& state) {
  auto cfg = harness::default_config("H-2p1s");
  const auto packet = cfg.make_packet();
  const auto trap = cfg.make_trap();
  observables::OamWindow win{-3, 3};
  observables::GridSpec grid;
  grid.richardson_check = false;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        observables::pair_probability(cfg.atom, packet, trap, cfg.m_e, win, grid));
  }
}
BENCHMARK(BM_PairProbabilityH);

} // namespace

BENCHMARK_MAIN();
