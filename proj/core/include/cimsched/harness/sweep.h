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

#ifndef CIMSCHED_HARNESS_SWEEP_H_
#define CIMSCHED_HARNESS_SWEEP_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cimsched/harness/pipeline.h"

namespace cimsched::harness {

struct SweepConfig {
  std::vector<std::string> benchmarks = default_benchmarks();
  std::vector<std::int64_t> extra_pes = {4, 8, 16, 32};
  std::vector<Mode> modes = {Mode::kLayerByLayer, Mode::kWdup, Mode::kXinf, Mode::kWdupXinf};
  // Also run the modes without duplication at x = 0 (PE_min exactly).
  bool include_reference_rows = true;
  std::int64_t pe_rows = 256;
  std::int64_t pe_cols = 256;
  double t_mvm_ns = 1400.0;
  std::int64_t sets_per_layer = sched::kDefaultSetsPerLayer;
  mapping::SolverMode solver = mapping::SolverMode::kGreedy;
  std::filesystem::path models_dir = default_models_dir();
  // When set, results.csv/json plus per-configuration schedule.json and
  // gantt.svg are written here.
  std::optional<std::filesystem::path> output_dir;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct SweepRow {
  std::string benchmark;
  std::int64_t extra_pes = 0;
  Mode mode = Mode::kLayerByLayer;
  std::int64_t pe_min = 0;
  std::int64_t num_pe = 0;
  std::int64_t cycles = 0;
  double latency_ns = 0.0;
  double utilization = 0.0;
  double speedup = 0.0;
  std::int64_t baseline_cycles = 0;
  double baseline_utilization = 0.0;
  double speedup_relation_deviation = 0.0;
};

/// Runs every (benchmark, x, mode) cell; rows come back sorted by
/// (benchmark order in the config, x, mode). Cells run concurrently.
std::vector<SweepRow> run_sweep(const SweepConfig& config);

std::string rows_to_csv(const std::vector<SweepRow>& rows);
std::string rows_to_json(const std::vector<SweepRow>& rows);
/// Fixed-width table: utilization with 3 decimals, speedup with 1.
std::string rows_to_table(const std::vector<SweepRow>& rows);

}  // namespace cimsched::harness

#endif  // CIMSCHED_HARNESS_SWEEP_H_
