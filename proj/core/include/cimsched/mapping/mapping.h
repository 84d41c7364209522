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

#ifndef CIMSCHED_MAPPING_MAPPING_H_
#define CIMSCHED_MAPPING_MAPPING_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cimsched/ir/graph.h"

namespace cimsched::mapping {

/// Abstract accelerator: F crossbar PEs of M x N cells, one MVM per cycle.
struct ArchConfig {
  std::int64_t num_pe = 0;      // F; 0 sizes the array to whatever the mapping needs
  std::int64_t pe_rows = 256;    // M
  std::int64_t pe_cols = 256;    // N
  double t_mvm_ns = 1400.0;
};

struct Tiling {
  std::int64_t tiles_v = 1;  // ceil(K_W*K_H*K_I / N)
  std::int64_t tiles_h = 1;  // ceil(K_O / M)
  std::int64_t pe_count = 1;

  friend bool operator==(const Tiling&, const Tiling&) = default;
};

/// PEs needed to hold one copy of an im2col-unrolled kernel matrix.
Tiling pe_count(const ir::KernelSpec& kernel, const ArchConfig& arch);

/// Cycles to produce a full OFM with intra-layer scheduling: one output
/// vector per MVM, so O_H * O_W.
std::int64_t intra_layer_latency(const ir::TensorShape& ofm);

/// PE_min: PEs to store every base layer's weights exactly once.
std::int64_t min_pe_requirement(const ir::NNGraph& graph, const ArchConfig& arch);

struct PeRange {
  std::int64_t begin = 0;
  std::int64_t end = 0;
  [[nodiscard]] std::int64_t size() const { return end - begin; }
  friend bool operator==(const PeRange&, const PeRange&) = default;
};

/// One PE group holding a copy of a layer's weights.
struct ReplicaMapping {
  std::string node;  // graph node computing this replica
  PeRange pes;
  std::int64_t cycles = 0;  // OFM vectors this replica computes
};

struct LayerMapping {
  std::string layer;
  std::int64_t pe_count = 0;
  std::int64_t tiles_v = 0;
  std::int64_t tiles_h = 0;
  std::int64_t duplicates = 1;
  std::int64_t t_init_cycles = 0;  // whole-OFM latency without duplication
  PeRange pes;                     // covers all replicas
  std::vector<ReplicaMapping> replicas;
};

class MappingPlan {
 public:
  std::vector<LayerMapping> layers;  // base-layer topological order
  std::int64_t pe_min = 0;           // C_num = sum of pe_count
  std::int64_t total_pe_used = 0;    // sum of pe_count * duplicates
  std::int64_t num_pe = 0;           // F

  [[nodiscard]] const LayerMapping& layer(const std::string& name) const;
  [[nodiscard]] bool has_layer(const std::string& name) const;

  struct ReplicaRef {
    const LayerMapping* layer;
    const ReplicaMapping* replica;
    std::size_t replica_index;
  };
  /// Looks up the replica computed by a graph node; std::nullopt if none.
  [[nodiscard]] std::optional<ReplicaRef> find_replica(const std::string& node) const;

  [[nodiscard]] std::string to_json() const;
};

/// Maps every base node of a canonical (possibly duplicated) graph onto
/// disjoint contiguous PE ranges in topological order. Replicas produced by
/// apply_duplication are grouped under their original layer.
/// Throws kInfeasible when the graph needs more than arch.num_pe PEs.
MappingPlan map_graph(const ir::NNGraph& graph, const ArchConfig& arch);

}  // namespace cimsched::mapping

#endif  // CIMSCHED_MAPPING_MAPPING_H_
