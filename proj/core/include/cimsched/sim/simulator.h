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

#ifndef CIMSCHED_SIM_SIMULATOR_H_
#define CIMSCHED_SIM_SIMULATOR_H_

#include <cstdint>
#include <string>
#include <vector>

#include "cimsched/ir/graph.h"
#include "cimsched/mapping/mapping.h"
#include "cimsched/sched/schedule.h"

namespace cimsched::sim {

/// Layer-by-layer reference on the non-duplicated graph.
struct Baseline {
  std::int64_t cycles = 0;   // sum of t_init
  std::int64_t active_pe_cycles = 0;  // sum(c_i t_i)
  double utilization = 0.0;           // sum(c_i t_i) / (PE_min * sum(t_i))
};

struct SimReport {
  std::string config_label;
  std::int64_t total_cycles = 0;
  double total_latency_ns = 0.0;
  std::vector<std::int64_t> per_pe_active_cycles;  // indexed by PE id
  double utilization = 0.0;
  std::int64_t baseline_cycles = 0;
  double speedup = 0.0;

  [[nodiscard]] std::int64_t active_pe_cycles() const;
  [[nodiscard]] std::string to_json() const;
};

/// Replays a schedule on the PE array. While a set executes, every PE of the
/// replica's group is active. Utilization is the mean active fraction over
/// all arch.num_pe PEs, so spare PEs count as idle.
/// Throws kInvalidSchedule for sets whose replica is not mapped, or that
/// overlap on one PE group.
SimReport simulate(const sched::Schedule& schedule, const mapping::MappingPlan& plan,
                   const mapping::ArchConfig& arch, std::int64_t baseline_cycles = 0,
                   std::string config_label = {});

Baseline layer_by_layer_baseline(const ir::NNGraph& graph, const mapping::MappingPlan& plan);

/// Relative gap between the measured speedup and the one predicted from
/// utilizations: |S - Ut (PE_min + x) / (Ut_lbl PE_min)| / S, computed
/// exactly. Throws kInvalidSchedule for an empty run or baseline.
double check_speedup_relation(const SimReport& report, const Baseline& baseline,
                              std::int64_t pe_min, std::int64_t extra_pes);

}  // namespace cimsched::sim

#endif  // CIMSCHED_SIM_SIMULATOR_H_
