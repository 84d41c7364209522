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

#ifndef CIMSCHED_HARNESS_PIPELINE_H_
#define CIMSCHED_HARNESS_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cimsched/ir/graph.h"
#include "cimsched/mapping/duplication.h"
#include "cimsched/mapping/mapping.h"
#include "cimsched/sched/schedule.h"
#include "cimsched/sim/simulator.h"

namespace cimsched::harness {

/// Mapping x scheduling combination.
enum class Mode {
  kLayerByLayer,  // "lbl"
  kWdup,          // "wdup": duplication, layer-by-layer
  kXinf,          // "xinf": cross-layer, no duplication
  kWdupXinf,      // "wdup+xinf"
};

std::string_view to_string(Mode mode);
std::optional<Mode> parse_mode(std::string_view text);
bool uses_duplication(Mode mode);
bool uses_cross_layer(Mode mode);

inline const std::vector<std::string>& default_benchmarks() {
  static const std::vector<std::string> kNames = {"tinyyolov4", "tinyyolov3", "vgg16",    "vgg19",
                                                  "resnet50",   "resnet101",  "resnet152"};
  return kNames;
}

/// Directory holding the shipped model files.
std::filesystem::path default_models_dir();

/// Loads `models_dir/<name>.json` (or `name` itself if it is a path to an
/// existing file) and prepares it: shapes, batchnorm folding, canonical form.
ir::NNGraph load_benchmark(const std::string& name,
                           const std::filesystem::path& models_dir = default_models_dir());

struct RunConfig {
  Mode mode = Mode::kLayerByLayer;
  std::int64_t extra_pes = 0;  // x; the array has PE_min + x PEs
  std::int64_t sets_per_layer = sched::kDefaultSetsPerLayer;
  std::int64_t pe_rows = 256;
  std::int64_t pe_cols = 256;
  double t_mvm_ns = 1400.0;
  mapping::SolverMode solver = mapping::SolverMode::kGreedy;
};

struct RunResult {
  Mode mode = Mode::kLayerByLayer;
  std::int64_t extra_pes = 0;
  std::int64_t pe_min = 0;
  mapping::ArchConfig arch;
  ir::NNGraph graph;  // after duplication, when applied
  std::vector<std::int64_t> duplicates;  // per base layer of the input graph
  mapping::MappingPlan plan;
  sched::Schedule schedule;
  sim::Baseline baseline;
  sim::SimReport report;
  double speedup_relation_deviation = 0.0;
};

std::string config_label(Mode mode, std::int64_t extra_pes);

/// Runs one configuration on a canonical graph:
/// map -> (duplicate) -> (cross-layer or sequential schedule) -> simulate.
RunResult run_configuration(const ir::NNGraph& canonical, const RunConfig& config);

}  // namespace cimsched::harness

#endif  // CIMSCHED_HARNESS_PIPELINE_H_
