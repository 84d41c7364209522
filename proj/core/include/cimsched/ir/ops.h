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

#ifndef CIMSCHED_IR_OPS_H_
#define CIMSCHED_IR_OPS_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "cimsched/ir/tensor_shape.h"

namespace cimsched::ir {

enum class OpKind {
  kInput,
  kConv2D,
  kDense,
  kPad,
  kBiasAdd,
  kActivation,
  kBatchNorm,
  kMaxPool2D,
  kAvgPool2D,
  kAdd,
  kConcat,
  kUpsample2D,
  kSlice,
  kOutput,
};

std::string_view to_string(OpKind op);
std::optional<OpKind> parse_op_kind(std::string_view text);

/// Base layers are lowered onto crossbar PEs; everything else runs on the
/// tile's general-purpose unit.
enum class Role { kBase, kNonBase };

inline Role role_of(OpKind op) {
  return (op == OpKind::kConv2D || op == OpKind::kDense) ? Role::kBase : Role::kNonBase;
}

enum class PaddingMode { kValid, kSame, kExplicit };

struct Padding {
  PaddingMode mode = PaddingMode::kValid;
  std::int64_t top = 0;
  std::int64_t bottom = 0;
  std::int64_t left = 0;
  std::int64_t right = 0;

  friend bool operator==(const Padding&, const Padding&) = default;
};

struct KernelSpec {
  std::int64_t k_h = 1;
  std::int64_t k_w = 1;
  std::int64_t k_in = 1;
  std::int64_t k_out = 1;
  std::int64_t stride_h = 1;
  std::int64_t stride_w = 1;
  Padding padding;

  // Length of one im2col kernel column.
  [[nodiscard]] std::int64_t column_length() const { return k_w * k_h * k_in; }

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

// conv2d and dense share this; dense is a 1x1 kernel over the flattened input.
struct ConvAttrs {
  KernelSpec kernel;
  bool bias = false;
  friend bool operator==(const ConvAttrs&, const ConvAttrs&) = default;
};

struct PoolAttrs {
  std::int64_t size_h = 1;
  std::int64_t size_w = 1;
  std::int64_t stride_h = 1;
  std::int64_t stride_w = 1;
  friend bool operator==(const PoolAttrs&, const PoolAttrs&) = default;
};

struct PadAttrs {
  std::int64_t top = 0;
  std::int64_t bottom = 0;
  std::int64_t left = 0;
  std::int64_t right = 0;
  friend bool operator==(const PadAttrs&, const PadAttrs&) = default;
};

struct SliceAttrs {
  std::array<std::int64_t, 3> begin{};  // h, w, c
  std::array<std::int64_t, 3> size{};
  friend bool operator==(const SliceAttrs&, const SliceAttrs&) = default;
};

struct UpsampleAttrs {
  std::int64_t factor = 2;
  friend bool operator==(const UpsampleAttrs&, const UpsampleAttrs&) = default;
};

enum class Axis { kH, kW, kC };

struct ConcatAttrs {
  Axis axis = Axis::kC;
  friend bool operator==(const ConcatAttrs&, const ConcatAttrs&) = default;
};

struct InputAttrs {
  TensorShape shape;
  friend bool operator==(const InputAttrs&, const InputAttrs&) = default;
};

enum class ActivationFn { kLinear, kRelu, kLeakyRelu, kSigmoid };

struct ActivationAttrs {
  ActivationFn fn = ActivationFn::kRelu;
  double alpha = 0.1;  // leaky slope
  friend bool operator==(const ActivationAttrs&, const ActivationAttrs&) = default;
};

struct BatchNormAttrs {
  double epsilon = 1e-3;
  friend bool operator==(const BatchNormAttrs&, const BatchNormAttrs&) = default;
};

using Attrs = std::variant<std::monostate, ConvAttrs, PoolAttrs, PadAttrs, SliceAttrs,
                           UpsampleAttrs, ConcatAttrs, InputAttrs, ActivationAttrs,
                           BatchNormAttrs>;

std::string_view to_string(Axis axis);
std::string_view to_string(ActivationFn fn);

}  // namespace cimsched::ir

#endif  // CIMSCHED_IR_OPS_H_
