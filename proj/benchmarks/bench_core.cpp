#include <benchmark/benchmark.h>

#include <cmath>

#include "eemod/game.hpp"
#include "eemod/numerics.hpp"
#include "eemod/queueing.hpp"

using namespace eemod;

namespace {

void BM_QFunction(benchmark::State& state) {
  double x = 0.0;
  for (auto _ : state) {
    x += 1e-4;
    if (x > 30.0) x = 0.0;
    benchmark::DoNotOptimize(numerics::q_function(x));
  }
}
BENCHMARK(BM_QFunction);

void BM_Efficiency(benchmark::State& state) {
  const auto scheme = ModulationScheme::uncoded(2, 100);
  double g = 1.0;
  for (auto _ : state) {
    g = g > 100.0 ? 1.0 : g * 1.001;
    benchmark::DoNotOptimize(efficiency(scheme, Sir{g}));
  }
}
BENCHMARK(BM_Efficiency);

void BM_EfficiencyDerivative(benchmark::State& state) {
  const auto scheme = ModulationScheme::uncoded(2, 100);
  double g = 1.0;
  for (auto _ : state) {
    g = g > 100.0 ? 1.0 : g * 1.001;
    benchmark::DoNotOptimize(efficiency_derivative(scheme, Sir{g}));
  }
}
BENCHMARK(BM_EfficiencyDerivative);

void BM_OptimalSir(benchmark::State& state) {
  const auto scheme =
      ModulationScheme::uncoded(static_cast<int>(state.range(0)), 100);
  for (auto _ : state) benchmark::DoNotOptimize(optimal_sir(scheme));
}
BENCHMARK(BM_OptimalSir)->Arg(2)->Arg(6)->Arg(10);

void BM_EfficiencyInverse(benchmark::State& state) {
  const auto scheme = ModulationScheme::uncoded(2, 100);
  for (auto _ : state)
    benchmark::DoNotOptimize(efficiency_inverse(scheme, 0.801));
}
BENCHMARK(BM_EfficiencyInverse);

void BM_BestResponse(benchmark::State& state) {
  UserProfile user;
  user.gain = 1e-4;
  user.packet_bits = 100;
  user.b_max = 10;
  user.traffic = {0.001, 55.0};
  for (auto _ : state)
    benchmark::DoNotOptimize(
        best_response(user, 1.0, RatePolicy::ParetoDominant));
}
BENCHMARK(BM_BestResponse);

void BM_NashEquilibrium(benchmark::State& state) {
  NetworkEnv env;
  env.bandwidth_hz = 1e6;
  env.noise_w = 3.98e-14;
  numerics::SplitMix64 rng(5);
  for (int i = 0; i < state.range(0); ++i) {
    UserProfile user;
    user.gain = std::pow(10.0, rng.uniform_in(-5.0, -3.0));
    user.packet_bits = 100;
    user.b_max = 10;
    user.traffic.arrival_pps = 100.0;
    user.traffic.delay_bound_s = 1.0;
    env.users.push_back(user);
  }
  for (auto _ : state)
    benchmark::DoNotOptimize(
        nash_equilibrium(env, RatePolicy::ParetoDominant));
}
BENCHMARK(BM_NashEquilibrium)->Arg(2)->Arg(8);

void BM_SimulateMg1(benchmark::State& state) {
  const LinkOperatingPoint op{ModulationScheme::uncoded(2, 100), 1e6,
                              Sir::from_db(9.1)};
  const TrafficQos traffic{5000.0, 1.0};
  std::uint64_t seed = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(simulate_mg1(op, traffic, 10000, ++seed));
}
BENCHMARK(BM_SimulateMg1);

}  // namespace

BENCHMARK_MAIN();
