#include <benchmark/benchmark.h>

#include "hetcache/allocation.hpp"
#include "hetcache/caching.hpp"
#include "hetcache/experiments.hpp"
#include "hetcache/solver.hpp"
#include "hetcache/special_math.hpp"

namespace {

using namespace hetcache;

void BM_UpperIncompleteGamma(benchmark::State& state) {
  double a = -2.3;
  double x = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(upper_incomplete_gamma(a, x));
    a = a >= 0.9 ? -2.3 : a + 1e-6;  // defeat value caching
  }
}
BENCHMARK(BM_UpperIncompleteGamma);

void BM_Zeta0PointApi(benchmark::State& state) {
  LinkBoundParams link;
  link.theta = 100.0;
  link.load = 0.01;
  int slots = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(zeta0(link, slots));
    slots = slots % 10 + 1;
  }
}
BENCHMARK(BM_Zeta0PointApi);

void BM_ExpectedDelayBoundCold(benchmark::State& state) {
  double theta = 1.0;
  for (auto _ : state) {
    LinkBoundParams link;
    link.theta = theta;
    link.load = 0.01;
    benchmark::DoNotOptimize(expected_delay_bound(link).bound_slots);
    theta += 1e-3;  // a fresh memo entry every iteration
  }
}
BENCHMARK(BM_ExpectedDelayBoundCold);

void BM_ExpectedDelayBoundWarm(benchmark::State& state) {
  LinkBoundParams link;
  link.theta = 42.0;
  link.load = 0.01;
  expected_delay_bound(link);
  for (auto _ : state)
    benchmark::DoNotOptimize(expected_delay_bound(link).bound_slots);
}
BENCHMARK(BM_ExpectedDelayBoundWarm);

void BM_SampleDelay(benchmark::State& state) {
  TrialConfig config;
  config.link.theta = 2.0;
  config.link.load = 0.01;
  config.trials = static_cast<int>(state.range(0));
  config.max_slots = 50;
  config.seed = 3;
  for (auto _ : state)
    benchmark::DoNotOptimize(sample_delay(config).mean_delay());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleDelay)->Arg(1000)->Arg(10000);

void BM_DeliveryBound(benchmark::State& state) {
  Scenario sc = build_scenario(tiny_config(), 1);
  DelayBoundTable bounds(sc.instance);
  Assignment channels = allocate_channels(sc.instance);
  PlacementResult placed =
      place_all(sc.instance, sc.popularity, channels, bounds);
  DeliveryEvaluator eval(sc.instance, sc.popularity, bounds);
  eval.set_channels(placed.assignment);
  for (int f = 1; f <= 6; ++f) {
    int cacher = placed.assignment.cacher_of(f);
    if (cacher >= 0) eval.place(f, cacher);
  }
  int u = 1, f = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval.bound(u, f));
    f = f % 6 + 1;
    if (f == 1) u = u % 4 + 1;
  }
}
BENCHMARK(BM_DeliveryBound);

void BM_HeuristicPlacement(benchmark::State& state) {
  Scenario sc = build_scenario(tiny_config(), 2);
  DelayBoundTable bounds(sc.instance);
  Assignment channels = allocate_channels(sc.instance);
  place_all(sc.instance, sc.popularity, channels, bounds);  // warm the table
  for (auto _ : state)
    benchmark::DoNotOptimize(
        place_all(sc.instance, sc.popularity, channels, bounds).sdr);
}
BENCHMARK(BM_HeuristicPlacement);

void BM_ExhaustiveSolve(benchmark::State& state) {
  Scenario sc = build_scenario(tiny_config(), 2);
  DelayBoundTable bounds(sc.instance);
  solve_exhaustive(sc.instance, sc.popularity, bounds);  // warm the table
  for (auto _ : state)
    benchmark::DoNotOptimize(
        solve_exhaustive(sc.instance, sc.popularity, bounds).sdr);
}
BENCHMARK(BM_ExhaustiveSolve);

void BM_ChannelAllocation(benchmark::State& state) {
  SystemConfig config = reference_config();
  config.num_ues = static_cast<int>(state.range(0));
  Scenario sc = build_scenario(config, 3);
  for (auto _ : state)
    benchmark::DoNotOptimize(choose_partition(sc.instance).nu);
}
BENCHMARK(BM_ChannelAllocation)->Arg(8)->Arg(22);

}  // namespace

BENCHMARK_MAIN();
