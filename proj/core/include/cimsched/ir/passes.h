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

#ifndef CIMSCHED_IR_PASSES_H_
#define CIMSCHED_IR_PASSES_H_

#include "cimsched/ir/graph.h"

namespace cimsched::ir {

/// Computes every node's output shape.
///
/// conv2d: O = floor((I - K) / stride) + 1 per spatial dim after padding.
/// Throws kShapeMismatch (add/concat/kernel depth) or kNonPositiveDim.
NNGraph infer_shapes(const NNGraph& graph);

/// Removes batchnorm nodes by rescaling the producing base layer.
///
/// The batchnorm's channel shift becomes an explicit bias_add (or is merged
/// into an existing one / a fused conv bias). When numeric parameters exist,
/// w' = w * g / sqrt(v + eps) and b' = (b - m) * g / sqrt(v + eps) + beta.
/// Throws kFoldFailed when no base layer feeds the batchnorm.
NNGraph fold_batchnorm(const NNGraph& graph);

struct CanonicalizeOptions {
  int quant_bits = 4;
};

/// Lowers implicit "same" padding to pad nodes, splits fused bias into
/// bias_add nodes and annotates base layers with a quantization width.
/// Requires inferred shapes and no remaining batchnorm; idempotent.
NNGraph canonicalize(const NNGraph& graph, const CanonicalizeOptions& options = {});

/// parse -> infer_shapes -> fold_batchnorm -> canonicalize, the form every
/// downstream stage expects.
NNGraph prepare(const NNGraph& parsed, const CanonicalizeOptions& options = {});

/// True when the graph has no batchnorm and every base layer is unpadded and
/// bias-free.
bool is_canonical(const NNGraph& graph);

/// Explicit (top, bottom, left, right) padding equivalent to "same": extra
/// padding goes to the bottom/right.
Padding same_padding(const TensorShape& input, const KernelSpec& kernel);

}  // namespace cimsched::ir

#endif  // CIMSCHED_IR_PASSES_H_
