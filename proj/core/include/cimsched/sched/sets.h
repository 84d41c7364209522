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

#ifndef CIMSCHED_SCHED_SETS_H_
#define CIMSCHED_SCHED_SETS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "cimsched/ir/graph.h"
#include "cimsched/ir/region.h"

namespace cimsched::sched {

// A target of kFinestSets places no cap: every alignment unit becomes a set.
inline constexpr std::int64_t kFinestSets = 0;
inline constexpr std::int64_t kDefaultSetsPerLayer = kFinestSets;

/// OFM of one base node cut into a grid of hyperrectangular sets, the
/// smallest units the scheduler moves. Sets are stored in intra-layer
/// execution order (row-major over the grid).
struct SetPartition {
  std::string layer;  // base node name
  std::int64_t grid_rows = 1;
  std::int64_t grid_cols = 1;
  std::vector<Region> sets;

  [[nodiscard]] std::int64_t cycles(std::size_t set) const { return sets[set].area(); }
  [[nodiscard]] std::int64_t total_cycles() const;
};

/// Minimum set granularity along (rows, cols) imposed by pooling on the
/// non-base paths from `node` to the next base layers: the lcm of all pool
/// windows and strides met on the way.
std::pair<std::int64_t, std::int64_t> set_alignment(const ir::NNGraph& graph,
                                                    const std::string& node);

/// Cuts `extent` into `pieces` runs whose boundaries are multiples of
/// `unit`; remainder units go to the trailing runs so a ragged final unit
/// does not leave a tiny last run. Empty if fewer units than pieces.
std::vector<std::int64_t> aligned_split(std::int64_t extent, std::int64_t unit,
                                        std::int64_t pieces);

/// Stage I: one SetPartition per base node, in topological order.
///
/// Picks the grid with the most sets (at most `target_sets_per_layer`, or
/// unbounded for kFinestSets) whose boundaries respect set_alignment() and
/// whose largest set is at most twice the smallest; ties prefer square grids,
/// then more rows. A layer that cannot satisfy the constraints gets a single
/// set.
std::vector<SetPartition> determine_sets(const ir::NNGraph& graph,
                                         std::int64_t target_sets_per_layer = kDefaultSetsPerLayer);

/// Stage III: intra-layer execution order (indices into partition.sets),
/// row-major over the set grid starting top-left.
std::vector<std::size_t> order_sets(const SetPartition& partition);

}  // namespace cimsched::sched

#endif  // CIMSCHED_SCHED_SETS_H_
