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

#include "cimsched/ir/graph.h"

#include <algorithm>
#include <functional>
#include <queue>
#include <set>

#include "cimsched/error.h"

namespace cimsched::ir {

const ConvAttrs& LayerNode::conv() const {
  const auto* attrs_ptr = std::get_if<ConvAttrs>(&attrs);
  if (attrs_ptr == nullptr) {
    throw Error(ErrorCode::kInvalidAttribute, "node '" + name + "' has no kernel attributes");
  }
  return *attrs_ptr;
}

const TensorShape& LayerNode::output_shape() const {
  if (!shape) throw Error(ErrorCode::kShapeMismatch, "node '" + name + "' has no inferred shape");
  return *shape;
}

LayerNode& NNGraph::add_node(LayerNode node) {
  if (index_.contains(node.name)) {
    throw Error(ErrorCode::kDuplicateName, "'" + node.name + "'");
  }
  index_.emplace(node.name, nodes_.size());
  nodes_.push_back(std::move(node));
  return nodes_.back();
}

void NNGraph::remove_node(std::string_view name) {
  auto it = std::find_if(nodes_.begin(), nodes_.end(),
                         [&](const LayerNode& n) { return n.name == name; });
  if (it == nodes_.end()) return;
  nodes_.erase(it);
  reindex();
}

void NNGraph::reindex() {
  index_.clear();
  for (std::size_t i = 0; i < nodes_.size(); ++i) index_.emplace(nodes_[i].name, i);
}

bool NNGraph::contains(std::string_view name) const {
  return index_.contains(std::string(name));
}

const LayerNode& NNGraph::node(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) throw Error(ErrorCode::kDanglingInput, "no node '" + std::string(name) + "'");
  return nodes_[it->second];
}

LayerNode& NNGraph::node(std::string_view name) {
  return const_cast<LayerNode&>(std::as_const(*this).node(name));
}

void NNGraph::rewire_consumers(std::string_view from, const std::string& to,
                               std::string_view except) {
  for (auto& n : nodes_) {
    if (!except.empty() && n.name == except) continue;
    for (auto& in : n.inputs) {
      if (in == from) in = to;
    }
  }
}

std::vector<std::string> NNGraph::consumers(std::string_view name) const {
  std::vector<std::string> out;
  for (const auto& n : nodes_) {
    if (std::find(n.inputs.begin(), n.inputs.end(), name) != n.inputs.end()) out.push_back(n.name);
  }
  std::sort(out.begin(), out.end());
  return out;
}

void NNGraph::validate() const {
  for (const auto& n : nodes_) {
    for (const auto& in : n.inputs) {
      if (!contains(in)) {
        throw Error(ErrorCode::kDanglingInput,
                    "node '" + n.name + "' references undefined node '" + in + "'");
      }
    }
  }
  (void)topological_order();
}

std::vector<std::string> NNGraph::topological_order() const {
  std::unordered_map<std::string, std::size_t> pending;
  std::unordered_map<std::string, std::vector<std::string>> succ;
  for (const auto& n : nodes_) {
    std::size_t count = 0;
    for (const auto& in : n.inputs) {
      if (!contains(in)) {
        throw Error(ErrorCode::kDanglingInput,
                    "node '" + n.name + "' references undefined node '" + in + "'");
      }
      succ[in].push_back(n.name);
      ++count;
    }
    pending[n.name] = count;
  }
  std::priority_queue<std::string, std::vector<std::string>, std::greater<>> ready;
  for (const auto& n : nodes_) {
    if (pending[n.name] == 0) ready.push(n.name);
  }
  std::vector<std::string> order;
  order.reserve(nodes_.size());
  while (!ready.empty()) {
    std::string cur = ready.top();
    ready.pop();
    order.push_back(cur);
    for (const auto& s : succ[cur]) {
      if (--pending[s] == 0) ready.push(s);
    }
  }
  if (order.size() != nodes_.size()) {
    throw Error(ErrorCode::kCycle, "graph '" + name_ + "' is not acyclic");
  }
  return order;
}

std::vector<std::string> NNGraph::base_layers() const {
  std::vector<std::string> out;
  for (auto& name : topological_order()) {
    if (node(name).is_base()) out.push_back(std::move(name));
  }
  return out;
}

}  // namespace cimsched::ir
