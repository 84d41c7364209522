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

#ifndef CIMSCHED_SCHED_DEPENDENCIES_H_
#define CIMSCHED_SCHED_DEPENDENCIES_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cimsched/ir/graph.h"
#include "cimsched/ir/region.h"
#include "cimsched/sched/sets.h"

namespace cimsched::sched {

/// Smallest rectangle covering what each input of `op` must provide for
/// `out_region` of its output. Windows with kernel < stride read strided
/// rows/cols; dependency analysis uses the exact pieces, this is their hull.
/// std::nullopt marks an input that contributes nothing (e.g. a
/// region lying entirely in padding, or outside a concat operand).
/// Throws kUnsupportedOp for ops without spatial semantics (dense gets the
/// whole input).
std::vector<std::optional<Region>> region_backward(const ir::NNGraph& graph,
                                                   const ir::LayerNode& op,
                                                   const Region& out_region);

struct SetRef {
  std::size_t layer = 0;  // index into the partition list
  std::size_t set = 0;    // index into SetPartition::sets

  friend bool operator==(const SetRef&, const SetRef&) = default;
};

/// Stage II/III output: data edges between sets of different base nodes and
/// resource edges chaining the sets of each base node.
class SetDependencyGraph {
 public:
  struct Edge {
    std::size_t from = 0;  // flat set ids
    std::size_t to = 0;
    friend bool operator==(const Edge&, const Edge&) = default;
  };

  SetDependencyGraph() = default;
  explicit SetDependencyGraph(const std::vector<SetPartition>& partitions);

  [[nodiscard]] std::size_t num_sets() const { return refs_.size(); }
  [[nodiscard]] std::size_t flat_id(SetRef ref) const { return offsets_[ref.layer] + ref.set; }
  [[nodiscard]] SetRef ref(std::size_t flat) const { return refs_[flat]; }
  [[nodiscard]] std::size_t num_layers() const { return offsets_.size(); }

  void add_data_edge(std::size_t from, std::size_t to);
  void add_resource_edge(std::size_t from, std::size_t to);

  [[nodiscard]] const std::vector<Edge>& data_edges() const { return data_edges_; }
  [[nodiscard]] const std::vector<Edge>& resource_edges() const { return resource_edges_; }

  // P: producer sets a set waits for; Q: consumer sets it feeds.
  [[nodiscard]] std::size_t in_degree(std::size_t flat) const { return p_[flat]; }
  [[nodiscard]] std::size_t out_degree(std::size_t flat) const { return q_[flat]; }

  [[nodiscard]] std::string to_dot(const std::vector<SetPartition>& partitions) const;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<SetRef> refs_;
  std::vector<Edge> data_edges_;
  std::vector<Edge> resource_edges_;
  std::vector<std::size_t> p_;
  std::vector<std::size_t> q_;
};

/// Walks `region` (of node `from`'s output) backwards through non-base ops
/// and reports, per reached base node, the regions of its OFM that are
/// needed (possibly several per producer).
/// Input nodes end a walk without a report.
struct ProducerRegion {
  std::string producer;
  Region region;
};
std::vector<ProducerRegion> propagate_to_producers(const ir::NNGraph& graph,
                                                   const std::string& from, const Region& region);

/// Stage II + III: data edges from every producer set whose region meets the
/// propagated IFM requirement of a consumer set, plus the row-major resource
/// chains. Throws kUnsupportedOp for non-base paths it cannot traverse.
SetDependencyGraph determine_dependencies(const ir::NNGraph& graph,
                                          const std::vector<SetPartition>& partitions);

}  // namespace cimsched::sched

#endif  // CIMSCHED_SCHED_DEPENDENCIES_H_
