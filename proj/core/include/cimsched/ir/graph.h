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

#ifndef CIMSCHED_IR_GRAPH_H_
#define CIMSCHED_IR_GRAPH_H_

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cimsched/ir/ops.h"
#include "cimsched/ir/tensor_shape.h"

namespace cimsched::ir {

/// Optional numeric payload. The scheduler is shape-driven and never reads
/// these; they exist for batchnorm folding and numeric equivalence checks.
///
/// Conv kernels are stored [k_h][k_w][k_in][k_out], row-major.
struct Weights {
  std::vector<double> kernel;
  std::vector<double> bias;
  std::vector<double> gamma;
  std::vector<double> beta;
  std::vector<double> mean;
  std::vector<double> variance;

  [[nodiscard]] bool empty() const {
    return kernel.empty() && bias.empty() && gamma.empty() && beta.empty() && mean.empty() &&
           variance.empty();
  }
};

struct LayerNode {
  std::string name;
  OpKind op = OpKind::kInput;
  std::vector<std::string> inputs;
  Attrs attrs;
  std::optional<TensorShape> shape;

  // Set on base layers whose weights absorbed a batchnorm.
  bool bn_folded = false;
  // Quantization annotation attached to base layers by canonicalize().
  std::optional<int> quant_bits;
  // For duplicated base layers: the layer they replicate and their index.
  std::string origin;
  int replica = 0;

  std::shared_ptr<const Weights> weights;

  [[nodiscard]] Role role() const { return role_of(op); }
  [[nodiscard]] bool is_base() const { return role() == Role::kBase; }
  // Name of the original layer this node computes (itself unless duplicated).
  [[nodiscard]] const std::string& layer_name() const { return origin.empty() ? name : origin; }

  [[nodiscard]] const ConvAttrs& conv() const;
  [[nodiscard]] const TensorShape& output_shape() const;
};

/// Directed acyclic graph of layer nodes. Nodes are kept in insertion order;
/// topological_order() gives a deterministic order with ties broken by name.
class NNGraph {
 public:
  NNGraph() = default;
  explicit NNGraph(std::string name) : name_(std::move(name)) {}

  [[nodiscard]] const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  // Throws kDuplicateName if the name is taken.
  LayerNode& add_node(LayerNode node);
  void remove_node(std::string_view name);

  [[nodiscard]] bool contains(std::string_view name) const;
  [[nodiscard]] const LayerNode& node(std::string_view name) const;
  LayerNode& node(std::string_view name);
  [[nodiscard]] const std::vector<LayerNode>& nodes() const { return nodes_; }
  [[nodiscard]] std::size_t size() const { return nodes_.size(); }

  // Replaces every reference to `from` in node inputs with `to`.
  void rewire_consumers(std::string_view from, const std::string& to,
                        std::string_view except = {});

  [[nodiscard]] std::vector<std::string> consumers(std::string_view name) const;

  // Throws kDanglingInput or kCycle.
  void validate() const;
  [[nodiscard]] std::vector<std::string> topological_order() const;
  // Base nodes in topological order.
  [[nodiscard]] std::vector<std::string> base_layers() const;

 private:
  void reindex();

  std::string name_;
  std::vector<LayerNode> nodes_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace cimsched::ir

#endif  // CIMSCHED_IR_GRAPH_H_
