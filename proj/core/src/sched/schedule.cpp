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

#include "cimsched/sched/schedule.h"

#include <algorithm>
#include <deque>

#include <nlohmann/json.hpp>

#include "cimsched/error.h"

namespace cimsched::sched {

// One set per line.
std::string Schedule::to_json() const {
  std::string out = "[";
  for (const auto& s : sets) {
    nlohmann::ordered_json e;
    e["layer"] = s.layer;
    e["duplicate"] = s.duplicate;
    e["set_index"] = s.set_index;
    e["region"] = {s.region.row_begin, s.region.row_end, s.region.col_begin, s.region.col_end};
    e["start_cycle"] = s.start_cycle;
    e["end_cycle"] = s.end_cycle;
    out += out.size() == 1 ? "\n" : ",\n";
    out += e.dump();
  }
  out += "\n]\n";
  return out;
}

namespace {

ScheduledSet describe(const mapping::MappingPlan& plan, const std::string& node) {
  const auto ref = plan.find_replica(node);
  if (!ref) throw Error(ErrorCode::kInvalidSchedule, "node '" + node + "' is not in the mapping");
  ScheduledSet s;
  s.layer = ref->layer->layer;
  s.node = node;
  s.duplicate = static_cast<std::int64_t>(ref->replica_index);
  return s;
}

}  // namespace

Schedule schedule_asap(const SetDependencyGraph& deps, const std::vector<SetPartition>& partitions,
                       const mapping::MappingPlan& plan) {
  const std::size_t n = deps.num_sets();
  std::vector<std::vector<std::size_t>> succ(n);
  std::vector<std::size_t> pending(n, 0);
  for (const auto* edges : {&deps.data_edges(), &deps.resource_edges()}) {
    for (const auto& e : *edges) {
      succ[e.from].push_back(e.to);
      ++pending[e.to];
    }
  }

  std::vector<std::int64_t> ready_at(n, 0);
  std::vector<std::int64_t> end(n, 0);
  std::deque<std::size_t> queue;
  for (std::size_t i = 0; i < n; ++i) {
    if (pending[i] == 0) queue.push_back(i);
  }
  std::size_t done = 0;
  while (!queue.empty()) {
    const std::size_t cur = queue.front();
    queue.pop_front();
    ++done;
    const SetRef ref = deps.ref(cur);
    end[cur] = ready_at[cur] + partitions[ref.layer].cycles(ref.set);
    for (const std::size_t s : succ[cur]) {
      ready_at[s] = std::max(ready_at[s], end[cur]);
      if (--pending[s] == 0) queue.push_back(s);
    }
  }
  if (done != n) throw Error(ErrorCode::kCycle, "set dependency graph is cyclic");

  Schedule schedule;
  schedule.sets.reserve(n);
  for (std::size_t l = 0; l < partitions.size(); ++l) {
    const ScheduledSet proto = describe(plan, partitions[l].layer);
    for (std::size_t s = 0; s < partitions[l].sets.size(); ++s) {
      const std::size_t id = deps.flat_id({l, s});
      ScheduledSet entry = proto;
      entry.set_index = static_cast<std::int64_t>(s);
      entry.region = partitions[l].sets[s];
      entry.start_cycle = ready_at[id];
      entry.end_cycle = end[id];
      schedule.makespan = std::max(schedule.makespan, entry.end_cycle);
      schedule.sets.push_back(std::move(entry));
    }
  }
  return schedule;
}

Schedule schedule_cross_layer(const ir::NNGraph& graph, const mapping::MappingPlan& plan,
                              std::int64_t target_sets_per_layer) {
  const auto partitions = determine_sets(graph, target_sets_per_layer);
  const auto deps = determine_dependencies(graph, partitions);
  return schedule_asap(deps, partitions, plan);
}

Schedule schedule_layer_by_layer(const ir::NNGraph& graph, const mapping::MappingPlan& plan) {
  Schedule schedule;
  std::int64_t clock = 0;
  for (const auto& layer : plan.layers) {
    std::int64_t layer_end = clock;
    for (const auto& replica : layer.replicas) {
      ScheduledSet entry = describe(plan, replica.node);
      const ir::TensorShape ofm = graph.node(replica.node).output_shape();
      entry.region = whole_region(ofm.height, ofm.width);
      entry.start_cycle = clock;
      entry.end_cycle = clock + entry.region.area();
      layer_end = std::max(layer_end, entry.end_cycle);
      schedule.sets.push_back(std::move(entry));
    }
    clock = layer_end;
  }
  schedule.makespan = clock;
  return schedule;
}

}  // namespace cimsched::sched
