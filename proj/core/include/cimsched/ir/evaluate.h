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

#ifndef CIMSCHED_IR_EVALUATE_H_
#define CIMSCHED_IR_EVALUATE_H_

#include <map>
#include <string>
#include <vector>

#include "cimsched/ir/graph.h"

namespace cimsched::ir {

/// Dense HWC feature map.
struct FeatureMap {
  TensorShape shape;
  std::vector<double> data;

  FeatureMap() = default;
  explicit FeatureMap(TensorShape s) : shape(s), data(static_cast<std::size_t>(s.elements())) {}

  double& at(std::int64_t h, std::int64_t w, std::int64_t c) {
    return data[static_cast<std::size_t>((h * shape.width + w) * shape.channels + c)];
  }
  [[nodiscard]] double at(std::int64_t h, std::int64_t w, std::int64_t c) const {
    return data[static_cast<std::size_t>((h * shape.width + w) * shape.channels + c)];
  }
};

/// Reference interpreter over a shaped graph with weights on every base
/// layer (and batchnorm/bias_add node that needs them). Returns the output
/// feature map of every node. Slow and exact; for tests and tooling only.
std::map<std::string, FeatureMap> evaluate(const NNGraph& graph,
                                           const std::map<std::string, FeatureMap>& inputs);

}  // namespace cimsched::ir

#endif  // CIMSCHED_IR_EVALUATE_H_
