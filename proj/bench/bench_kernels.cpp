// Serial reference vs OpenMP paths for the two data-parallel loops:
// per-cell elicitation and expert-permutation scenarios.

#include <random>

#include <benchmark/benchmark.h>

#include "gopa/pipeline.hpp"
#include "gopa/random_instances.hpp"
#include "gopa/sensitivity.hpp"

namespace {

gopa::GroupInput make_input(int experts, int attributes, int alternatives) {
  std::mt19937_64 rng(42);
  gopa::RandomProblemOptions o;
  o.max_experts = experts;
  o.max_attributes = attributes;
  o.min_alternatives = alternatives;
  o.max_alternatives = alternatives;
  // Redraw until the requested shape comes up.
  for (;;) {
    auto in = gopa::random_input(rng, o);
    if (int(in.problem.num_experts()) == experts && int(in.problem.num_attributes()) == attributes) return in;
  }
}

void BM_ElicitSerial(benchmark::State& state) {
  const auto in = make_input(5, int(state.range(0)), 10);
  for (auto _ : state) benchmark::DoNotOptimize(gopa::elicit_utilities_serial(in));
}

void BM_ElicitParallel(benchmark::State& state) {
  const auto in = make_input(5, int(state.range(0)), 10);
  for (auto _ : state) benchmark::DoNotOptimize(gopa::elicit_utilities(in));
}

void BM_SensitivitySerial(benchmark::State& state) {
  const auto in = make_input(int(state.range(0)), 6, 10);
  const auto u = gopa::elicit_utilities_serial(in);
  for (auto _ : state) benchmark::DoNotOptimize(gopa::run_sensitivity(in.problem, u, false));
}

void BM_SensitivityParallel(benchmark::State& state) {
  const auto in = make_input(int(state.range(0)), 6, 10);
  const auto u = gopa::elicit_utilities_serial(in);
  for (auto _ : state) benchmark::DoNotOptimize(gopa::run_sensitivity(in.problem, u, true));
}

}  // namespace

BENCHMARK(BM_ElicitSerial)->Arg(6)->Arg(24)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ElicitParallel)->Arg(6)->Arg(24)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SensitivitySerial)->Arg(5)->Arg(7)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SensitivityParallel)->Arg(5)->Arg(7)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
