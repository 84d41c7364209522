// Copyright 2026 The cimsched Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <random>

#include "cimsched/harness/pipeline.h"
#include "cimsched/mapping/duplication.h"
#include "cimsched/mapping/mapping.h"
#include "cimsched/sched/dependencies.h"
#include "cimsched/sched/schedule.h"
#include "cimsched/sched/sets.h"

namespace {

using namespace cimsched;

void BM_SolveDuplication(benchmark::State& state) {
  const auto mode = state.range(1) == 0 ? mapping::SolverMode::kGreedy : mapping::SolverMode::kExact;
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::int64_t> t_dist(1, 50000), c_dist(1, 20);
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<std::int64_t> t(n), c(n);
  std::int64_t base = 0;
  for (std::size_t i = 0; i < n; ++i) {
    t[i] = t_dist(rng);
    c[i] = c_dist(rng);
    base += c[i];
  }
  for (auto _ : state) benchmark::DoNotOptimize(mapping::solve_duplication(t, c, base + 32, mode));
}
BENCHMARK(BM_SolveDuplication)->ArgsProduct({{21, 155}, {0, 1}});

const ir::NNGraph& model(int index) {
  static const std::vector<ir::NNGraph> graphs = [] {
    std::vector<ir::NNGraph> g;
    for (const auto& name : harness::default_benchmarks()) g.push_back(harness::load_benchmark(name));
    return g;
  }();
  return graphs[static_cast<std::size_t>(index)];
}

void BM_DetermineSets(benchmark::State& state) {
  const auto& g = model(static_cast<int>(state.range(0)));
  state.SetLabel(g.name());
  for (auto _ : state) benchmark::DoNotOptimize(sched::determine_sets(g, state.range(1)));
}
BENCHMARK(BM_DetermineSets)->ArgsProduct({{0, 2, 6}, {16, sched::kFinestSets}})->Unit(benchmark::kMillisecond);

void BM_Dependencies(benchmark::State& state) {
  const auto& g = model(static_cast<int>(state.range(0)));
  state.SetLabel(g.name());
  const auto parts = sched::determine_sets(g, state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(sched::determine_dependencies(g, parts));
}
BENCHMARK(BM_Dependencies)->ArgsProduct({{0, 2, 6}, {16, sched::kFinestSets}})->Unit(benchmark::kMillisecond);

void BM_RunConfiguration(benchmark::State& state) {
  const auto& g = model(static_cast<int>(state.range(0)));
  state.SetLabel(g.name());
  harness::RunConfig rc;
  rc.mode = harness::Mode::kWdupXinf;
  rc.extra_pes = 32;
  for (auto _ : state) benchmark::DoNotOptimize(harness::run_configuration(g, rc).report.total_cycles);
}
BENCHMARK(BM_RunConfiguration)->DenseRange(0, 6)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
