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

#include "cimsched/sched/sets.h"

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>

#include "cimsched/error.h"

namespace cimsched::sched {

std::int64_t SetPartition::total_cycles() const {
  std::int64_t total = 0;
  for (const auto& s : sets) total += s.area();
  return total;
}

std::pair<std::int64_t, std::int64_t> set_alignment(const ir::NNGraph& graph,
                                                    const std::string& node) {
  std::int64_t unit_h = 1;
  std::int64_t unit_w = 1;
  std::vector<std::string> stack = graph.consumers(node);
  std::set<std::string> seen;
  while (!stack.empty()) {
    const std::string cur = stack.back();
    stack.pop_back();
    if (!seen.insert(cur).second) continue;
    const ir::LayerNode& n = graph.node(cur);
    if (n.is_base()) continue;
    if (const auto* pool = std::get_if<ir::PoolAttrs>(&n.attrs)) {
      unit_h = std::lcm(unit_h, std::lcm(pool->size_h, pool->stride_h));
      unit_w = std::lcm(unit_w, std::lcm(pool->size_w, pool->stride_w));
    }
    for (auto& next : graph.consumers(cur)) stack.push_back(std::move(next));
  }
  return {unit_h, unit_w};
}

std::vector<std::int64_t> aligned_split(std::int64_t extent, std::int64_t unit,
                                        std::int64_t pieces) {
  const std::int64_t units = (extent + unit - 1) / unit;
  if (pieces < 1 || units < pieces) return {};
  const std::int64_t base = units / pieces;
  const std::int64_t extra = units % pieces;
  std::vector<std::int64_t> sizes;
  std::int64_t used = 0;
  for (std::int64_t k = 0; k < pieces; ++k) {
    std::int64_t run = (base + (k >= pieces - extra ? 1 : 0)) * unit;
    run = std::min(run, extent - used);
    sizes.push_back(run);
    used += run;
  }
  return sizes;
}

namespace {

// (shortest, longest) run of aligned_split; (0, 0) when infeasible.
std::pair<std::int64_t, std::int64_t> split_extremes(std::int64_t extent, std::int64_t unit,
                                                     std::int64_t pieces) {
  const auto runs = aligned_split(extent, unit, pieces);
  if (runs.empty()) return {0, 0};
  const auto [lo, hi] = std::minmax_element(runs.begin(), runs.end());
  return {*lo, *hi};
}

SetPartition grid_partition(const std::string& layer, const ir::TensorShape& ofm, std::int64_t unit_h,
                            std::int64_t unit_w, std::int64_t rows, std::int64_t cols) {
  SetPartition p;
  p.layer = layer;
  p.grid_rows = rows;
  p.grid_cols = cols;
  std::int64_t r = 0;
  for (const auto h : aligned_split(ofm.height, unit_h, rows)) {
    std::int64_t c = 0;
    for (const auto w : aligned_split(ofm.width, unit_w, cols)) {
      p.sets.push_back({r, r + h, c, c + w});
      c += w;
    }
    r += h;
  }
  return p;
}

}  // namespace

std::vector<SetPartition> determine_sets(const ir::NNGraph& graph,
                                         std::int64_t target_sets_per_layer) {
  if (target_sets_per_layer < 0) {
    throw Error(ErrorCode::kInvalidAttribute, "target sets per layer must be >= 0");
  }
  std::vector<SetPartition> partitions;
  for (const auto& name : graph.base_layers()) {
    const ir::TensorShape ofm = graph.node(name).output_shape();
    const auto [unit_h, unit_w] = set_alignment(graph, name);
    const std::int64_t units_h = (ofm.height + unit_h - 1) / unit_h;
    const std::int64_t units_w = (ofm.width + unit_w - 1) / unit_w;
    const std::int64_t cap = target_sets_per_layer == kFinestSets ? units_h * units_w : target_sets_per_layer;

    std::int64_t best_rows = 0;
    std::int64_t best_cols = 0;
    for (std::int64_t rows = 1; rows <= std::min(cap, units_h); ++rows) {
      const auto [hmin, hmax] = split_extremes(ofm.height, unit_h, rows);
      if (hmin < 1) continue;
      for (std::int64_t cols = std::min(cap / rows, units_w); cols >= 1; --cols) {
        const std::int64_t n = rows * cols;
        const std::int64_t best_n = best_rows * best_cols;
        if (n < best_n) break;
        const auto [wmin, wmax] = split_extremes(ofm.width, unit_w, cols);
        if (wmin < 1 || hmax * wmax > 2 * hmin * wmin) continue;
        const std::int64_t skew = std::abs(rows - cols);
        const std::int64_t best_skew = std::abs(best_rows - best_cols);
        if (n > best_n || skew < best_skew || (skew == best_skew && rows > best_rows)) {
          best_rows = rows;
          best_cols = cols;
        }
        break;
      }
    }
    if (best_rows == 0) {
      partitions.push_back(SetPartition{name, 1, 1, {whole_region(ofm.height, ofm.width)}});
    } else {
      partitions.push_back(grid_partition(name, ofm, unit_h, unit_w, best_rows, best_cols));
    }
  }
  return partitions;
}

std::vector<std::size_t> order_sets(const SetPartition& partition) {
  std::vector<std::size_t> order(partition.sets.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Region& ra = partition.sets[a];
    const Region& rb = partition.sets[b];
    return std::pair{ra.row_begin, ra.col_begin} < std::pair{rb.row_begin, rb.col_begin};
  });
  return order;
}

}  // namespace cimsched::sched
