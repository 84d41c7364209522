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

#include "cimsched/mapping/mapping.h"

#include <algorithm>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "cimsched/error.h"

namespace cimsched::mapping {

namespace {

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

}  // namespace

Tiling pe_count(const ir::KernelSpec& kernel, const ArchConfig& arch) {
  Tiling t;
  t.tiles_v = ceil_div(kernel.column_length(), arch.pe_cols);
  t.tiles_h = ceil_div(kernel.k_out, arch.pe_rows);
  t.pe_count = t.tiles_v * t.tiles_h;
  return t;
}

std::int64_t intra_layer_latency(const ir::TensorShape& ofm) { return ofm.height * ofm.width; }

std::int64_t min_pe_requirement(const ir::NNGraph& graph, const ArchConfig& arch) {
  std::int64_t total = 0;
  for (const auto& n : graph.nodes()) {
    // Replicas beyond the first hold copies, not additional weights.
    if (n.is_base() && n.replica == 0) total += pe_count(n.conv().kernel, arch).pe_count;
  }
  return total;
}

const LayerMapping& MappingPlan::layer(const std::string& name) const {
  for (const auto& l : layers) {
    if (l.layer == name) return l;
  }
  throw Error(ErrorCode::kDanglingInput, "no mapping for layer '" + name + "'");
}

bool MappingPlan::has_layer(const std::string& name) const {
  for (const auto& l : layers) {
    if (l.layer == name) return true;
  }
  return false;
}

std::optional<MappingPlan::ReplicaRef> MappingPlan::find_replica(const std::string& node) const {
  for (const auto& l : layers) {
    for (std::size_t i = 0; i < l.replicas.size(); ++i) {
      if (l.replicas[i].node == node) return ReplicaRef{&l, &l.replicas[i], i};
    }
  }
  return std::nullopt;
}

std::string MappingPlan::to_json() const {
  nlohmann::ordered_json j;
  auto& arr = j["layers"] = nlohmann::ordered_json::array();
  for (const auto& l : layers) {
    nlohmann::ordered_json e;
    e["name"] = l.layer;
    e["pe_count"] = l.pe_count;
    e["tiles_v"] = l.tiles_v;
    e["tiles_h"] = l.tiles_h;
    e["duplicates"] = l.duplicates;
    e["t_init_cycles"] = l.t_init_cycles;
    e["pe_range"] = {l.pes.begin, l.pes.end};
    auto& reps = e["replicas"] = nlohmann::ordered_json::array();
    for (const auto& r : l.replicas) {
      reps.push_back({{"node", r.node}, {"pe_range", {r.pes.begin, r.pes.end}}, {"cycles", r.cycles}});
    }
    arr.push_back(std::move(e));
  }
  j["totals"] = {{"pe_min", pe_min}, {"total_pe_used", total_pe_used}, {"F", num_pe}};
  return j.dump(2);
}

MappingPlan map_graph(const ir::NNGraph& graph, const ArchConfig& arch) {
  MappingPlan plan;
  plan.num_pe = arch.num_pe;
  std::unordered_map<std::string, std::size_t> by_layer;

  for (const auto& name : graph.base_layers()) {
    const ir::LayerNode& n = graph.node(name);
    const std::string& layer = n.layer_name();
    auto it = by_layer.find(layer);
    if (it == by_layer.end()) {
      LayerMapping lm;
      lm.layer = layer;
      const Tiling t = pe_count(n.conv().kernel, arch);
      lm.pe_count = t.pe_count;
      lm.tiles_v = t.tiles_v;
      lm.tiles_h = t.tiles_h;
      lm.duplicates = 0;
      it = by_layer.emplace(layer, plan.layers.size()).first;
      plan.layers.push_back(std::move(lm));
    }
    LayerMapping& lm = plan.layers[it->second];
    ReplicaMapping r;
    r.node = name;
    r.cycles = intra_layer_latency(n.output_shape());
    lm.replicas.push_back(std::move(r));
    lm.duplicates += 1;
    lm.t_init_cycles += lm.replicas.back().cycles;
  }

  // Replicas of one layer sit next to each other; order them by replica id
  // so ranges do not depend on node-name ordering.
  std::int64_t next = 0;
  for (auto& lm : plan.layers) {
    std::stable_sort(lm.replicas.begin(), lm.replicas.end(), [&](const auto& a, const auto& b) {
      return graph.node(a.node).replica < graph.node(b.node).replica;
    });
    lm.pes.begin = next;
    for (auto& r : lm.replicas) {
      r.pes = {next, next + lm.pe_count};
      next += lm.pe_count;
    }
    lm.pes.end = next;
    plan.pe_min += lm.pe_count;
  }
  plan.total_pe_used = next;
  if (arch.num_pe == 0) plan.num_pe = next;
  if (arch.num_pe > 0 && plan.total_pe_used > arch.num_pe) {
    throw Error(ErrorCode::kInfeasible, "graph '" + graph.name() + "' needs " +
                                            std::to_string(plan.total_pe_used) + " PEs, arch has " +
                                            std::to_string(arch.num_pe));
  }
  return plan;
}

}  // namespace cimsched::mapping
