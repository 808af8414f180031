#include <benchmark/benchmark.h>

#include "ufcr/allocator.hpp"
#include "ufcr/harness.hpp"
#include "ufcr/interference.hpp"
#include "ufcr/oracle.hpp"
#include "ufcr/power.hpp"

using namespace ufcr;

namespace {

struct Fixture {
  Scenario scenario = generate_spectrum(3, 32, 3, {16, 20});
  ChannelSet channels = generate_channels(4, scenario, 4);
  PsdProfile psd = psd_profile(WaveformSpec::ufofdm(40.0));
  InterferenceFactors omega = interference_matrix(scenario, channels, psd);
  Allocation allocation = allocate_subbands(channels, scenario, 4);
  PowerProblem problem = make_power_problem(allocation, channels, scenario, omega);

  Fixture() {
    scenario.i_th_watts = dbw_to_watts(-50.0);
    problem = make_power_problem(allocation, channels, scenario, omega);
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

void BM_PsdProfile(benchmark::State& state) {
  const WaveformKind kind = static_cast<WaveformKind>(state.range(0));
  WaveformSpec spec = WaveformSpec::ofdm();
  if (kind == WaveformKind::fbmc) spec = WaveformSpec::fbmc();
  if (kind == WaveformKind::ufofdm) spec = WaveformSpec::ufofdm(60.0);
  for (auto _ : state) benchmark::DoNotOptimize(psd_profile(spec));
}
BENCHMARK(BM_PsdProfile)->Arg(0)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_InterferenceMatrix(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(interference_matrix(f.scenario, f.channels, f.psd));
}
BENCHMARK(BM_InterferenceMatrix)->Unit(benchmark::kMillisecond);

void BM_Allocate(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(allocate_subbands(f.channels, f.scenario, 4));
}
BENCHMARK(BM_Allocate);

void BM_SolvePowerSocp(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(solve_power(f.problem));
}
BENCHMARK(BM_SolvePowerSocp)->Unit(benchmark::kMicrosecond);

void BM_DualWaterfilling(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(dual_waterfilling(f.problem));
}
BENCHMARK(BM_DualWaterfilling)->Unit(benchmark::kMicrosecond);

void BM_Oracle(benchmark::State& state) {
  InstanceOptions o;
  o.n_sm = static_cast<int>(state.range(0));
  const Instance inst = random_instance(1, o);
  for (auto _ : state)
    benchmark::DoNotOptimize(exhaustive_best(inst.channels, inst.scenario, o.k_sm, inst.omega));
}
BENCHMARK(BM_Oracle)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
