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

#include "cimsched/ir/evaluate.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cimsched/error.h"
#include "cimsched/ir/passes.h"

namespace cimsched::ir {

namespace {

const Weights& require_weights(const LayerNode& n) {
  if (!n.weights) throw Error(ErrorCode::kInvalidAttribute, "node '" + n.name + "' has no weights");
  return *n.weights;
}

FeatureMap conv2d(const LayerNode& n, const FeatureMap& in) {
  const KernelSpec& k = n.conv().kernel;
  Padding pad = k.padding;
  if (pad.mode == PaddingMode::kSame) pad = same_padding(in.shape, k);
  const Weights& w = require_weights(n);
  FeatureMap out(n.output_shape());
  for (std::int64_t oh = 0; oh < out.shape.height; ++oh) {
    for (std::int64_t ow = 0; ow < out.shape.width; ++ow) {
      for (std::int64_t oc = 0; oc < k.k_out; ++oc) {
        double acc = 0.0;
        for (std::int64_t kh = 0; kh < k.k_h; ++kh) {
          const std::int64_t ih = oh * k.stride_h + kh - pad.top;
          if (ih < 0 || ih >= in.shape.height) continue;
          for (std::int64_t kw = 0; kw < k.k_w; ++kw) {
            const std::int64_t iw = ow * k.stride_w + kw - pad.left;
            if (iw < 0 || iw >= in.shape.width) continue;
            for (std::int64_t ic = 0; ic < k.k_in; ++ic) {
              const auto widx = static_cast<std::size_t>(((kh * k.k_w + kw) * k.k_in + ic) * k.k_out + oc);
              acc += in.at(ih, iw, ic) * w.kernel[widx];
            }
          }
        }
        if (n.conv().bias && !w.bias.empty()) acc += w.bias[static_cast<std::size_t>(oc)];
        out.at(oh, ow, oc) = acc;
      }
    }
  }
  return out;
}

FeatureMap dense(const LayerNode& n, const FeatureMap& in) {
  const KernelSpec& k = n.conv().kernel;
  const Weights& w = require_weights(n);
  FeatureMap out(n.output_shape());
  for (std::int64_t o = 0; o < k.k_out; ++o) {
    double acc = 0.0;
    for (std::int64_t i = 0; i < k.k_in; ++i) {
      acc += in.data[static_cast<std::size_t>(i)] * w.kernel[static_cast<std::size_t>(i * k.k_out + o)];
    }
    if (n.conv().bias && !w.bias.empty()) acc += w.bias[static_cast<std::size_t>(o)];
    out.data[static_cast<std::size_t>(o)] = acc;
  }
  return out;
}

FeatureMap pool(const LayerNode& n, const FeatureMap& in, bool max) {
  const auto& p = std::get<PoolAttrs>(n.attrs);
  FeatureMap out(n.output_shape());
  for (std::int64_t oh = 0; oh < out.shape.height; ++oh) {
    for (std::int64_t ow = 0; ow < out.shape.width; ++ow) {
      for (std::int64_t c = 0; c < out.shape.channels; ++c) {
        double acc = max ? -std::numeric_limits<double>::infinity() : 0.0;
        for (std::int64_t dh = 0; dh < p.size_h; ++dh) {
          for (std::int64_t dw = 0; dw < p.size_w; ++dw) {
            const double v = in.at(oh * p.stride_h + dh, ow * p.stride_w + dw, c);
            acc = max ? std::max(acc, v) : acc + v;
          }
        }
        out.at(oh, ow, c) = max ? acc : acc / static_cast<double>(p.size_h * p.size_w);
      }
    }
  }
  return out;
}

double activate(const ActivationAttrs& a, double v) {
  switch (a.fn) {
    case ActivationFn::kLinear: return v;
    case ActivationFn::kRelu: return std::max(v, 0.0);
    case ActivationFn::kLeakyRelu: return v >= 0.0 ? v : a.alpha * v;
    case ActivationFn::kSigmoid: return 1.0 / (1.0 + std::exp(-v));
  }
  return v;
}

}  // namespace

std::map<std::string, FeatureMap> evaluate(const NNGraph& graph,
                                           const std::map<std::string, FeatureMap>& inputs) {
  std::map<std::string, FeatureMap> values;
  for (const auto& name : graph.topological_order()) {
    const LayerNode& n = graph.node(name);
    auto arg = [&](std::size_t i) -> const FeatureMap& { return values.at(n.inputs.at(i)); };
    FeatureMap out;
    switch (n.op) {
      case OpKind::kInput: {
        auto it = inputs.find(name);
        if (it == inputs.end()) throw Error(ErrorCode::kDanglingInput, "no value for input '" + name + "'");
        if (it->second.shape != n.output_shape()) {
          throw Error(ErrorCode::kShapeMismatch, "input '" + name + "' value shape differs");
        }
        out = it->second;
        break;
      }
      case OpKind::kConv2D: out = conv2d(n, arg(0)); break;
      case OpKind::kDense: out = dense(n, arg(0)); break;
      case OpKind::kPad: {
        const auto& p = std::get<PadAttrs>(n.attrs);
        const FeatureMap& in = arg(0);
        out = FeatureMap(n.output_shape());
        for (std::int64_t h = 0; h < in.shape.height; ++h)
          for (std::int64_t w = 0; w < in.shape.width; ++w)
            for (std::int64_t c = 0; c < in.shape.channels; ++c)
              out.at(h + p.top, w + p.left, c) = in.at(h, w, c);
        break;
      }
      case OpKind::kBiasAdd: {
        out = arg(0);
        if (n.weights && !n.weights->bias.empty()) {
          const auto& b = n.weights->bias;
          for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] += b[i % b.size()];
        }
        break;
      }
      case OpKind::kActivation: {
        out = arg(0);
        const auto& a = std::get<ActivationAttrs>(n.attrs);
        for (auto& v : out.data) v = activate(a, v);
        break;
      }
      case OpKind::kBatchNorm: {
        out = arg(0);
        const Weights& p = require_weights(n);
        const double eps = std::get<BatchNormAttrs>(n.attrs).epsilon;
        const std::size_t ch = p.gamma.size();
        for (std::size_t i = 0; i < out.data.size(); ++i) {
          const std::size_t c = i % ch;
          out.data[i] = (out.data[i] - p.mean[c]) / std::sqrt(p.variance[c] + eps) * p.gamma[c] + p.beta[c];
        }
        break;
      }
      case OpKind::kMaxPool2D: out = pool(n, arg(0), true); break;
      case OpKind::kAvgPool2D: out = pool(n, arg(0), false); break;
      case OpKind::kAdd: {
        out = arg(0);
        for (std::size_t i = 1; i < n.inputs.size(); ++i) {
          const auto& other = arg(i);
          for (std::size_t j = 0; j < out.data.size(); ++j) out.data[j] += other.data[j];
        }
        break;
      }
      case OpKind::kConcat: {
        const Axis axis = std::get<ConcatAttrs>(n.attrs).axis;
        out = FeatureMap(n.output_shape());
        std::int64_t offset = 0;
        for (std::size_t i = 0; i < n.inputs.size(); ++i) {
          const FeatureMap& in = arg(i);
          for (std::int64_t h = 0; h < in.shape.height; ++h)
            for (std::int64_t w = 0; w < in.shape.width; ++w)
              for (std::int64_t c = 0; c < in.shape.channels; ++c) {
                const std::int64_t oh = axis == Axis::kH ? h + offset : h;
                const std::int64_t ow = axis == Axis::kW ? w + offset : w;
                const std::int64_t oc = axis == Axis::kC ? c + offset : c;
                out.at(oh, ow, oc) = in.at(h, w, c);
              }
          offset += axis == Axis::kH ? in.shape.height : axis == Axis::kW ? in.shape.width : in.shape.channels;
        }
        break;
      }
      case OpKind::kUpsample2D: {
        const auto f = std::get<UpsampleAttrs>(n.attrs).factor;
        const FeatureMap& in = arg(0);
        out = FeatureMap(n.output_shape());
        for (std::int64_t h = 0; h < out.shape.height; ++h)
          for (std::int64_t w = 0; w < out.shape.width; ++w)
            for (std::int64_t c = 0; c < out.shape.channels; ++c) out.at(h, w, c) = in.at(h / f, w / f, c);
        break;
      }
      case OpKind::kSlice: {
        const auto& s = std::get<SliceAttrs>(n.attrs);
        const FeatureMap& in = arg(0);
        out = FeatureMap(n.output_shape());
        for (std::int64_t h = 0; h < out.shape.height; ++h)
          for (std::int64_t w = 0; w < out.shape.width; ++w)
            for (std::int64_t c = 0; c < out.shape.channels; ++c)
              out.at(h, w, c) = in.at(h + s.begin[0], w + s.begin[1], c + s.begin[2]);
        break;
      }
      case OpKind::kOutput: out = arg(0); break;
    }
    values.emplace(name, std::move(out));
  }
  return values;
}

}  // namespace cimsched::ir
