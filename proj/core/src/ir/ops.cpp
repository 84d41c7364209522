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

#include "cimsched/ir/ops.h"

#include <array>
#include <sstream>
#include <utility>

#include "cimsched/error.h"
#include "cimsched/ir/tensor_shape.h"

namespace cimsched {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSyntax: return "syntax error";
    case ErrorCode::kDuplicateName: return "duplicate node name";
    case ErrorCode::kUnknownOp: return "unknown op";
    case ErrorCode::kUnknownAttribute: return "unknown attribute";
    case ErrorCode::kInvalidAttribute: return "invalid attribute";
    case ErrorCode::kDanglingInput: return "dangling input reference";
    case ErrorCode::kCycle: return "cycle detected";
    case ErrorCode::kShapeMismatch: return "shape mismatch";
    case ErrorCode::kNonPositiveDim: return "non-positive output dimension";
    case ErrorCode::kFoldFailed: return "batchnorm folding failed";
    case ErrorCode::kInfeasible: return "infeasible configuration";
    case ErrorCode::kInvalidDuplication: return "invalid duplication";
    case ErrorCode::kUnsupportedOp: return "unsupported op";
    case ErrorCode::kInvalidSchedule: return "invalid schedule";
    case ErrorCode::kIo: return "i/o error";
  }
  return "error";
}

namespace ir {

namespace {

constexpr std::array<std::pair<OpKind, std::string_view>, 14> kOpNames{{
    {OpKind::kInput, "input"},
    {OpKind::kConv2D, "conv2d"},
    {OpKind::kDense, "dense"},
    {OpKind::kPad, "pad"},
    {OpKind::kBiasAdd, "bias_add"},
    {OpKind::kActivation, "activation"},
    {OpKind::kBatchNorm, "batchnorm"},
    {OpKind::kMaxPool2D, "maxpool2d"},
    {OpKind::kAvgPool2D, "avgpool2d"},
    {OpKind::kAdd, "add"},
    {OpKind::kConcat, "concat"},
    {OpKind::kUpsample2D, "upsample2d"},
    {OpKind::kSlice, "slice"},
    {OpKind::kOutput, "output"},
}};

}  // namespace

std::string_view to_string(OpKind op) {
  for (const auto& [kind, name] : kOpNames) {
    if (kind == op) return name;
  }
  return "unknown";
}

std::optional<OpKind> parse_op_kind(std::string_view text) {
  for (const auto& [kind, name] : kOpNames) {
    if (name == text) return kind;
  }
  return std::nullopt;
}

std::string_view to_string(Axis axis) {
  switch (axis) {
    case Axis::kH: return "h";
    case Axis::kW: return "w";
    case Axis::kC: return "c";
  }
  return "c";
}

std::string_view to_string(ActivationFn fn) {
  switch (fn) {
    case ActivationFn::kLinear: return "linear";
    case ActivationFn::kRelu: return "relu";
    case ActivationFn::kLeakyRelu: return "leaky_relu";
    case ActivationFn::kSigmoid: return "sigmoid";
  }
  return "linear";
}

std::string to_string(const TensorShape& shape) {
  std::ostringstream os;
  os << shape;
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const TensorShape& shape) {
  return os << "(" << shape.height << ", " << shape.width << ", " << shape.channels << ")";
}

}  // namespace ir
}  // namespace cimsched
