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

#include "cimsched/ir/passes.h"

#include <cmath>
#include <string>

#include "cimsched/error.h"

namespace cimsched::ir {

namespace {

std::int64_t window_output(std::int64_t in, std::int64_t window, std::int64_t stride,
                           const std::string& node, const char* dim) {
  if (in < window) {
    throw Error(ErrorCode::kNonPositiveDim, "node '" + node + "': " + dim + " input " +
                                                std::to_string(in) + " smaller than window " +
                                                std::to_string(window));
  }
  return (in - window) / stride + 1;
}

const TensorShape& single_input(const NNGraph& g, const LayerNode& n) {
  if (n.inputs.size() != 1) {
    throw Error(ErrorCode::kShapeMismatch,
                "node '" + n.name + "' expects exactly one input, got " + std::to_string(n.inputs.size()));
  }
  return g.node(n.inputs.front()).output_shape();
}

TensorShape infer_node(const NNGraph& g, LayerNode& n) {
  switch (n.op) {
    case OpKind::kInput:
      return std::get<InputAttrs>(n.attrs).shape;
    case OpKind::kConv2D: {
      const TensorShape in = single_input(g, n);
      auto& conv = std::get<ConvAttrs>(n.attrs);
      auto& k = conv.kernel;
      if (k.k_in != in.channels) {
        throw Error(ErrorCode::kShapeMismatch, "conv '" + n.name + "' kernel depth " +
                                                   std::to_string(k.k_in) + " vs input channels " +
                                                   std::to_string(in.channels));
      }
      Padding pad = k.padding;
      if (pad.mode == PaddingMode::kSame) pad = same_padding(in, k);
      const std::int64_t h = in.height + pad.top + pad.bottom;
      const std::int64_t w = in.width + pad.left + pad.right;
      return {window_output(h, k.k_h, k.stride_h, n.name, "height"),
              window_output(w, k.k_w, k.stride_w, n.name, "width"), k.k_out};
    }
    case OpKind::kDense: {
      const TensorShape in = single_input(g, n);
      auto& k = std::get<ConvAttrs>(n.attrs).kernel;
      if (k.k_in == 0) k.k_in = in.elements();
      if (k.k_in != in.elements()) {
        throw Error(ErrorCode::kShapeMismatch, "dense '" + n.name + "' expects " +
                                                   std::to_string(k.k_in) + " inputs, got " +
                                                   std::to_string(in.elements()));
      }
      return {1, 1, k.k_out};
    }
    case OpKind::kPad: {
      const TensorShape in = single_input(g, n);
      const auto& p = std::get<PadAttrs>(n.attrs);
      return {in.height + p.top + p.bottom, in.width + p.left + p.right, in.channels};
    }
    case OpKind::kBiasAdd:
    case OpKind::kActivation:
    case OpKind::kBatchNorm:
    case OpKind::kOutput:
      return single_input(g, n);
    case OpKind::kMaxPool2D:
    case OpKind::kAvgPool2D: {
      const TensorShape in = single_input(g, n);
      const auto& p = std::get<PoolAttrs>(n.attrs);
      return {window_output(in.height, p.size_h, p.stride_h, n.name, "height"),
              window_output(in.width, p.size_w, p.stride_w, n.name, "width"), in.channels};
    }
    case OpKind::kAdd: {
      const TensorShape first = g.node(n.inputs.front()).output_shape();
      for (const auto& in : n.inputs) {
        if (g.node(in).output_shape() != first) {
          throw Error(ErrorCode::kShapeMismatch, "add '" + n.name + "': " + to_string(first) +
                                                     " vs " + to_string(g.node(in).output_shape()));
        }
      }
      return first;
    }
    case OpKind::kConcat: {
      const Axis axis = std::get<ConcatAttrs>(n.attrs).axis;
      TensorShape out = g.node(n.inputs.front()).output_shape();
      for (std::size_t i = 1; i < n.inputs.size(); ++i) {
        const TensorShape s = g.node(n.inputs[i]).output_shape();
        const bool ok = (axis == Axis::kH || s.height == out.height) &&
                        (axis == Axis::kW || s.width == out.width) &&
                        (axis == Axis::kC || s.channels == out.channels);
        if (!ok) {
          throw Error(ErrorCode::kShapeMismatch, "concat '" + n.name + "': " + to_string(out) +
                                                     " vs " + to_string(s));
        }
        if (axis == Axis::kH) out.height += s.height;
        if (axis == Axis::kW) out.width += s.width;
        if (axis == Axis::kC) out.channels += s.channels;
      }
      return out;
    }
    case OpKind::kUpsample2D: {
      const TensorShape in = single_input(g, n);
      const auto f = std::get<UpsampleAttrs>(n.attrs).factor;
      return {in.height * f, in.width * f, in.channels};
    }
    case OpKind::kSlice: {
      const TensorShape in = single_input(g, n);
      const auto& s = std::get<SliceAttrs>(n.attrs);
      const std::int64_t dims[3] = {in.height, in.width, in.channels};
      for (int d = 0; d < 3; ++d) {
        if (s.begin[d] + s.size[d] > dims[d]) {
          throw Error(ErrorCode::kShapeMismatch,
                      "slice '" + n.name + "' exceeds input " + to_string(in));
        }
      }
      return {s.size[0], s.size[1], s.size[2]};
    }
  }
  throw Error(ErrorCode::kUnsupportedOp, std::string(to_string(n.op)));
}

// Follows batchnorm -> [bias_add] -> base layer. Each hop must be the sole
// consumer of its producer, otherwise rescaling would leak to other users.
struct FoldChain {
  std::string base;
  std::string bias_add;  // empty when absent
};

FoldChain find_fold_chain(const NNGraph& g, const LayerNode& bn) {
  if (bn.inputs.size() != 1) {
    throw Error(ErrorCode::kFoldFailed, "batchnorm '" + bn.name + "' must have one input");
  }
  FoldChain chain;
  std::string cur = bn.inputs.front();
  if (g.node(cur).op == OpKind::kBiasAdd) {
    chain.bias_add = cur;
    if (g.consumers(cur).size() != 1) {
      throw Error(ErrorCode::kFoldFailed, "bias_add '" + cur + "' feeds more than the batchnorm");
    }
    cur = g.node(cur).inputs.front();
  }
  const LayerNode& base = g.node(cur);
  if (!base.is_base()) {
    throw Error(ErrorCode::kFoldFailed,
                "batchnorm '" + bn.name + "' has no base-layer predecessor");
  }
  if (g.consumers(cur).size() != 1) {
    throw Error(ErrorCode::kFoldFailed, "base layer '" + cur + "' feeds more than the batchnorm");
  }
  chain.base = cur;
  return chain;
}

std::string fresh_name(const NNGraph& g, const std::string& stem) {
  if (!g.contains(stem)) return stem;
  for (int i = 1;; ++i) {
    std::string candidate = stem + "_" + std::to_string(i);
    if (!g.contains(candidate)) return candidate;
  }
}

}  // namespace

Padding same_padding(const TensorShape& input, const KernelSpec& k) {
  auto along = [](std::int64_t in, std::int64_t window, std::int64_t stride) {
    const std::int64_t out = (in + stride - 1) / stride;
    const std::int64_t total = std::max<std::int64_t>((out - 1) * stride + window - in, 0);
    return std::pair{total / 2, total - total / 2};
  };
  const auto [top, bottom] = along(input.height, k.k_h, k.stride_h);
  const auto [left, right] = along(input.width, k.k_w, k.stride_w);
  return {PaddingMode::kExplicit, top, bottom, left, right};
}

NNGraph infer_shapes(const NNGraph& graph) {
  NNGraph out = graph;
  for (const auto& name : out.topological_order()) {
    LayerNode& n = out.node(name);
    TensorShape s = infer_node(out, n);
    if (!s.valid()) {
      throw Error(ErrorCode::kNonPositiveDim, "node '" + name + "' -> " + to_string(s));
    }
    n.shape = s;
  }
  return out;
}

NNGraph fold_batchnorm(const NNGraph& graph) {
  NNGraph g = graph;
  for (const auto& name : graph.topological_order()) {
    if (graph.node(name).op != OpKind::kBatchNorm) continue;
    const LayerNode bn = g.node(name);
    const FoldChain chain = find_fold_chain(g, bn);
    LayerNode& base = g.node(chain.base);
    base.bn_folded = true;
    ConvAttrs& conv = std::get<ConvAttrs>(base.attrs);

    const bool numeric = bn.weights && !bn.weights->gamma.empty();
    std::vector<double> scale;
    if (numeric) {
      const auto& p = *bn.weights;
      const double eps = std::get<BatchNormAttrs>(bn.attrs).epsilon;
      scale.resize(p.gamma.size());
      for (std::size_t c = 0; c < scale.size(); ++c) {
        scale[c] = p.gamma[c] / std::sqrt(p.variance[c] + eps);
      }
      if (base.weights && !base.weights->kernel.empty()) {
        auto w = std::make_shared<Weights>(*base.weights);
        const std::size_t k_out = scale.size();
        for (std::size_t i = 0; i < w->kernel.size(); ++i) w->kernel[i] *= scale[i % k_out];
        if (!w->bias.empty() && chain.bias_add.empty()) {
          // Fused bias absorbs the shift.
          for (std::size_t c = 0; c < k_out; ++c) {
            w->bias[c] = (w->bias[c] - p.mean[c]) * scale[c] + p.beta[c];
          }
        } else if (!w->bias.empty()) {
          for (std::size_t c = 0; c < k_out; ++c) w->bias[c] *= scale[c];
        }
        base.weights = std::move(w);
      }
    }

    if (!chain.bias_add.empty()) {
      LayerNode& bias = g.node(chain.bias_add);
      if (numeric) {
        auto w = bias.weights ? std::make_shared<Weights>(*bias.weights) : std::make_shared<Weights>();
        const auto& p = *bn.weights;
        w->bias.resize(scale.size(), 0.0);
        for (std::size_t c = 0; c < scale.size(); ++c) {
          w->bias[c] = (w->bias[c] - p.mean[c]) * scale[c] + p.beta[c];
        }
        bias.weights = std::move(w);
      }
      g.rewire_consumers(name, chain.bias_add);
      g.remove_node(name);
    } else if (conv.bias) {
      g.rewire_consumers(name, chain.base);
      g.remove_node(name);
    } else {
      // The batchnorm becomes the bias_add carrying its shift, keeping its name.
      LayerNode& replaced = g.node(name);
      replaced.op = OpKind::kBiasAdd;
      replaced.attrs = std::monostate{};
      if (numeric) {
        auto w = std::make_shared<Weights>();
        const auto& p = *bn.weights;
        w->bias.resize(scale.size());
        for (std::size_t c = 0; c < scale.size(); ++c) w->bias[c] = p.beta[c] - p.mean[c] * scale[c];
        replaced.weights = std::move(w);
      } else {
        replaced.weights = nullptr;
      }
    }
  }
  return g;
}

NNGraph canonicalize(const NNGraph& graph, const CanonicalizeOptions& options) {
  NNGraph g = graph;
  for (const auto& n : g.nodes()) {
    if (!n.shape) {
      g = infer_shapes(g);
      break;
    }
  }
  for (const auto& name : graph.topological_order()) {
    const LayerNode& original = g.node(name);
    if (original.op == OpKind::kBatchNorm) {
      throw Error(ErrorCode::kFoldFailed, "canonicalize requires folded batchnorm ('" + name + "')");
    }
    if (!original.is_base()) continue;

    LayerNode node = original;
    ConvAttrs& conv = std::get<ConvAttrs>(node.attrs);

    if (node.op == OpKind::kConv2D && conv.kernel.padding.mode != PaddingMode::kValid) {
      Padding pad = conv.kernel.padding;
      if (pad.mode == PaddingMode::kSame) {
        pad = same_padding(g.node(node.inputs.front()).output_shape(), conv.kernel);
      }
      if (pad.top + pad.bottom + pad.left + pad.right > 0) {
        LayerNode pad_node;
        pad_node.name = fresh_name(g, name + "/pad");
        pad_node.op = OpKind::kPad;
        pad_node.inputs = node.inputs;
        pad_node.attrs = PadAttrs{pad.top, pad.bottom, pad.left, pad.right};
        node.inputs = {pad_node.name};
        g.add_node(std::move(pad_node));
      }
      conv.kernel.padding = Padding{};
    }

    if (conv.bias) {
      LayerNode bias_node;
      bias_node.name = fresh_name(g, name + "/bias");
      bias_node.op = OpKind::kBiasAdd;
      bias_node.inputs = {name};
      if (node.weights && !node.weights->bias.empty()) {
        auto b = std::make_shared<Weights>();
        b->bias = node.weights->bias;
        bias_node.weights = std::move(b);
        auto w = std::make_shared<Weights>(*node.weights);
        w->bias.clear();
        node.weights = std::move(w);
      }
      conv.bias = false;
      g.rewire_consumers(name, bias_node.name);
      g.add_node(std::move(bias_node));
    }

    node.quant_bits = options.quant_bits;
    g.node(name) = std::move(node);
  }
  return infer_shapes(g);
}

NNGraph prepare(const NNGraph& parsed, const CanonicalizeOptions& options) {
  return canonicalize(fold_batchnorm(infer_shapes(parsed)), options);
}

bool is_canonical(const NNGraph& graph) {
  for (const auto& n : graph.nodes()) {
    if (n.op == OpKind::kBatchNorm) return false;
    if (!n.shape) return false;
    if (n.is_base()) {
      const auto& conv = n.conv();
      if (conv.bias || conv.kernel.padding.mode != PaddingMode::kValid) return false;
      if (!n.quant_bits) return false;
    }
  }
  return true;
}

}  // namespace cimsched::ir
