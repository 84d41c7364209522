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

#include "cimsched/harness/pipeline.h"

#include <cstdlib>
#include <map>

#include "cimsched/error.h"
#include "cimsched/ir/model_io.h"
#include "cimsched/ir/passes.h"

#ifndef CIMSCHED_MODELS_DIR
#define CIMSCHED_MODELS_DIR "models"
#endif

namespace cimsched::harness {

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::kLayerByLayer: return "lbl";
    case Mode::kWdup: return "wdup";
    case Mode::kXinf: return "xinf";
    case Mode::kWdupXinf: return "wdup+xinf";
  }
  return "lbl";
}

std::optional<Mode> parse_mode(std::string_view text) {
  for (Mode m : {Mode::kLayerByLayer, Mode::kWdup, Mode::kXinf, Mode::kWdupXinf}) {
    if (to_string(m) == text) return m;
  }
  return std::nullopt;
}

bool uses_duplication(Mode mode) { return mode == Mode::kWdup || mode == Mode::kWdupXinf; }
bool uses_cross_layer(Mode mode) { return mode == Mode::kXinf || mode == Mode::kWdupXinf; }

std::filesystem::path default_models_dir() {
  if (const char* env = std::getenv("CIMSCHED_MODELS_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return CIMSCHED_MODELS_DIR;
}

ir::NNGraph load_benchmark(const std::string& name, const std::filesystem::path& models_dir) {
  std::filesystem::path path = name;
  if (!std::filesystem::is_regular_file(path)) path = models_dir / (name + ".json");
  return ir::prepare(ir::load_model(path));
}

std::string config_label(Mode mode, std::int64_t extra_pes) {
  switch (mode) {
    case Mode::kLayerByLayer: return "lbl";
    case Mode::kXinf: return "xinf";
    case Mode::kWdup: return "wdup+" + std::to_string(extra_pes) + " lbl";
    case Mode::kWdupXinf: return "wdup+" + std::to_string(extra_pes) + " xinf";
  }
  return {};
}

RunResult run_configuration(const ir::NNGraph& canonical, const RunConfig& config) {
  if (config.extra_pes < 0) throw Error(ErrorCode::kInfeasible, "extra PEs must be >= 0");
  RunResult result;
  result.mode = config.mode;
  result.extra_pes = config.extra_pes;
  result.arch.pe_rows = config.pe_rows;
  result.arch.pe_cols = config.pe_cols;
  result.arch.t_mvm_ns = config.t_mvm_ns;
  result.pe_min = mapping::min_pe_requirement(canonical, result.arch);
  result.arch.num_pe = result.pe_min + config.extra_pes;

  const mapping::MappingPlan reference = mapping::map_graph(canonical, result.arch);
  result.baseline = sim::layer_by_layer_baseline(canonical, reference);

  if (uses_duplication(config.mode)) {
    const auto problem = mapping::duplication_problem(canonical, result.arch);
    result.duplicates = mapping::solve_duplication(problem.t, problem.c, result.arch.num_pe, config.solver);
    std::map<std::string, std::int64_t> d;
    for (std::size_t i = 0; i < problem.layers.size(); ++i) d[problem.layers[i]] = result.duplicates[i];
    result.graph = mapping::apply_duplication(canonical, d);
    result.plan = mapping::map_graph(result.graph, result.arch);
  } else {
    result.graph = canonical;
    result.duplicates.assign(reference.layers.size(), 1);
    result.plan = reference;
  }

  result.schedule = uses_cross_layer(config.mode)
                        ? sched::schedule_cross_layer(result.graph, result.plan, config.sets_per_layer)
                        : sched::schedule_layer_by_layer(result.graph, result.plan);
  result.report = sim::simulate(result.schedule, result.plan, result.arch, result.baseline.cycles,
                                config_label(config.mode, config.extra_pes));
  result.speedup_relation_deviation =
      sim::check_speedup_relation(result.report, result.baseline, result.pe_min, config.extra_pes);
  return result;
}

}  // namespace cimsched::harness
