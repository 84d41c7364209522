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

#include "cimsched/sim/simulator.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <nlohmann/json.hpp>

#include "cimsched/error.h"

namespace cimsched::sim {

std::int64_t SimReport::active_pe_cycles() const {
  return std::accumulate(per_pe_active_cycles.begin(), per_pe_active_cycles.end(), std::int64_t{0});
}

std::string SimReport::to_json() const {
  nlohmann::ordered_json j;
  j["config"] = config_label;
  j["total_cycles"] = total_cycles;
  j["total_latency_ns"] = total_latency_ns;
  j["utilization"] = utilization;
  j["baseline_cycles"] = baseline_cycles;
  j["speedup"] = speedup;
  j["per_pe_active_cycles"] = per_pe_active_cycles;
  return j.dump(2);
}

SimReport simulate(const sched::Schedule& schedule, const mapping::MappingPlan& plan,
                   const mapping::ArchConfig& arch, std::int64_t baseline_cycles,
                   std::string config_label) {
  const std::int64_t num_pe = arch.num_pe > 0 ? arch.num_pe : plan.total_pe_used;
  SimReport report;
  report.config_label = std::move(config_label);
  report.per_pe_active_cycles.assign(static_cast<std::size_t>(num_pe), 0);

  // Busy intervals per replica group, to check resource exclusivity.
  std::map<std::string, std::vector<std::pair<std::int64_t, std::int64_t>>> busy;
  for (const auto& s : schedule.sets) {
    const auto ref = plan.find_replica(s.node);
    if (!ref) throw Error(ErrorCode::kInvalidSchedule, "set on unmapped node '" + s.node + "'");
    const mapping::PeRange pes = ref->replica->pes;
    if (pes.begin < 0 || pes.end > num_pe) {
      throw Error(ErrorCode::kInvalidSchedule, "node '" + s.node + "' uses PEs outside the array");
    }
    if (s.end_cycle - s.start_cycle != s.region.area()) {
      throw Error(ErrorCode::kInvalidSchedule, "set duration differs from its area on '" + s.node + "'");
    }
    const std::int64_t active = s.end_cycle - s.start_cycle;
    for (std::int64_t p = pes.begin; p < pes.end; ++p) {
      report.per_pe_active_cycles[static_cast<std::size_t>(p)] += active;
    }
    busy[s.node].emplace_back(s.start_cycle, s.end_cycle);
    report.total_cycles = std::max(report.total_cycles, s.end_cycle);
  }
  for (auto& [node, intervals] : busy) {
    std::sort(intervals.begin(), intervals.end());
    for (std::size_t i = 1; i < intervals.size(); ++i) {
      if (intervals[i].first < intervals[i - 1].second) {
        throw Error(ErrorCode::kInvalidSchedule, "overlapping sets on '" + node + "'");
      }
    }
  }

  report.total_latency_ns = static_cast<double>(report.total_cycles) * arch.t_mvm_ns;
  if (report.total_cycles > 0 && num_pe > 0) {
    report.utilization = static_cast<double>(report.active_pe_cycles()) /
                         (static_cast<double>(num_pe) * static_cast<double>(report.total_cycles));
  }
  report.baseline_cycles = baseline_cycles;
  if (baseline_cycles > 0 && report.total_cycles > 0) {
    report.speedup = static_cast<double>(baseline_cycles) / static_cast<double>(report.total_cycles);
  }
  return report;
}

Baseline layer_by_layer_baseline(const ir::NNGraph& graph, const mapping::MappingPlan& plan) {
  Baseline b;
  for (const auto& name : graph.base_layers()) {
    const ir::LayerNode& n = graph.node(name);
    const std::int64_t t = mapping::intra_layer_latency(n.output_shape());
    b.cycles += t;
    b.active_pe_cycles += plan.layer(n.layer_name()).pe_count * t;
  }
  if (b.cycles > 0 && plan.pe_min > 0) {
    b.utilization = static_cast<double>(b.active_pe_cycles) /
                    (static_cast<double>(plan.pe_min) * static_cast<double>(b.cycles));
  }
  return b;
}

double check_speedup_relation(const SimReport& report, const Baseline& baseline,
                              std::int64_t pe_min, std::int64_t extra_pes) {
  // With Ut = A / (N T), Ut_lbl = W / (P B) and S = B / T the gap reduces
  // to |N W - A (P + x)| / (N W); evaluated in integers so it is exact.
  const auto n = static_cast<std::int64_t>(report.per_pe_active_cycles.size());
  if (n == 0 || baseline.active_pe_cycles == 0 || report.total_cycles == 0 || pe_min == 0) {
    throw Error(ErrorCode::kInvalidSchedule, "speedup relation needs a non-empty run and baseline");
  }
  __extension__ typedef __int128 wide;
  const wide nw = static_cast<wide>(n) * baseline.active_pe_cycles;
  const wide gap = nw - static_cast<wide>(report.active_pe_cycles()) * (pe_min + extra_pes);
  const wide mag = gap < 0 ? -gap : gap;
  return static_cast<double>(static_cast<long double>(mag) / static_cast<long double>(nw));
}

}  // namespace cimsched::sim
