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

#ifndef CIMSCHED_SCHED_SCHEDULE_H_
#define CIMSCHED_SCHED_SCHEDULE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "cimsched/ir/graph.h"
#include "cimsched/ir/region.h"
#include "cimsched/mapping/mapping.h"
#include "cimsched/sched/dependencies.h"
#include "cimsched/sched/sets.h"

namespace cimsched::sched {

struct ScheduledSet {
  std::string layer;    // original layer name
  std::string node;     // base node executing it (replica)
  std::int64_t duplicate = 0;
  std::int64_t set_index = 0;
  Region region;
  std::int64_t start_cycle = 0;
  std::int64_t end_cycle = 0;
};

struct Schedule {
  std::vector<ScheduledSet> sets;
  std::int64_t makespan = 0;

  [[nodiscard]] std::string to_json() const;
};

/// Stage IV: every set starts at the latest end of its resource predecessor
/// and its data producers; non-base ops take zero cycles. Entries follow the
/// dependency graph's flat order. Throws kCycle on a cyclic dependency graph.
Schedule schedule_asap(const SetDependencyGraph& deps, const std::vector<SetPartition>& partitions,
                       const mapping::MappingPlan& plan);

/// Stages I-IV in one call.
Schedule schedule_cross_layer(const ir::NNGraph& graph, const mapping::MappingPlan& plan,
                              std::int64_t target_sets_per_layer = kDefaultSetsPerLayer);

/// Reference layer-by-layer execution: layers run one after another in
/// topological order, each computing its whole OFM; replicas of one layer
/// run side by side.
Schedule schedule_layer_by_layer(const ir::NNGraph& graph, const mapping::MappingPlan& plan);

}  // namespace cimsched::sched

#endif  // CIMSCHED_SCHED_SCHEDULE_H_
