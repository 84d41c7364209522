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

#include "cimsched/ir/model_io.h"

#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cimsched/error.h"

namespace cimsched::ir {

namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& layer, const std::string& what) {
  throw Error(ErrorCode::kInvalidAttribute, "layer '" + layer + "': " + what);
}

std::string position_of(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

void check_keys(const std::string& layer, const json& attrs,
                std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, _] : attrs.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) {
      throw Error(ErrorCode::kUnknownAttribute, "layer '" + layer + "': '" + key + "'");
    }
  }
}

std::int64_t positive(const std::string& layer, const json& v, const char* what) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < 1) {
    invalid(layer, std::string(what) + " must be a positive integer");
  }
  return v.get<std::int64_t>();
}

std::int64_t non_negative(const std::string& layer, const json& v, const char* what) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    invalid(layer, std::string(what) + " must be a non-negative integer");
  }
  return v.get<std::int64_t>();
}

std::vector<std::int64_t> int_array(const std::string& layer, const json& attrs, const char* key,
                                    std::size_t size, bool allow_zero) {
  if (!attrs.contains(key)) invalid(layer, std::string("missing '") + key + "'");
  const json& arr = attrs.at(key);
  if (!arr.is_array() || arr.size() != size) {
    invalid(layer, std::string("'") + key + "' must be an array of " + std::to_string(size));
  }
  std::vector<std::int64_t> out;
  for (const auto& v : arr) out.push_back(allow_zero ? non_negative(layer, v, key) : positive(layer, v, key));
  return out;
}

std::vector<double> number_array(const json& j, const char* key) {
  std::vector<double> out;
  if (!j.contains(key)) return out;
  for (const auto& v : j.at(key)) out.push_back(v.get<double>());
  return out;
}

std::shared_ptr<const Weights> load_weights(const std::string& layer, const json& attrs,
                                            const std::filesystem::path& base_dir) {
  if (!attrs.contains("weights")) return nullptr;
  if (!attrs.at("weights").is_string()) invalid(layer, "'weights' must be a file path");
  std::filesystem::path path = attrs.at("weights").get<std::string>();
  if (path.is_relative()) path = base_dir / path;
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open weights file '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kSyntax, path.string() + ": " + e.what());
  }
  auto w = std::make_shared<Weights>();
  w->kernel = number_array(j, "kernel");
  w->bias = number_array(j, "bias");
  w->gamma = number_array(j, "gamma");
  w->beta = number_array(j, "beta");
  w->mean = number_array(j, "mean");
  w->variance = number_array(j, "variance");
  return w;
}

Padding parse_padding(const std::string& layer, const json& attrs) {
  Padding p;
  if (!attrs.contains("padding")) return p;
  const json& v = attrs.at("padding");
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "valid") {
      p.mode = PaddingMode::kValid;
    } else if (s == "same") {
      p.mode = PaddingMode::kSame;
    } else {
      invalid(layer, "padding must be \"valid\" or \"same\"");
    }
    return p;
  }
  auto pads = int_array(layer, attrs, "padding", 4, true);
  p = {PaddingMode::kExplicit, pads[0], pads[1], pads[2], pads[3]};
  return p;
}

LayerNode parse_layer(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw Error(ErrorCode::kSyntax, "layer entry must be an object");
  check_keys("?", j, {"name", "op", "inputs", "attrs"});
  if (!j.contains("name") || !j.at("name").is_string()) {
    throw Error(ErrorCode::kSyntax, "layer without a string 'name'");
  }
  LayerNode node;
  node.name = j.at("name").get<std::string>();
  if (node.name.empty()) throw Error(ErrorCode::kSyntax, "empty layer name");
  if (!j.contains("op") || !j.at("op").is_string()) {
    throw Error(ErrorCode::kSyntax, "layer '" + node.name + "' has no 'op'");
  }
  const auto op_text = j.at("op").get<std::string>();
  auto op = parse_op_kind(op_text);
  if (!op) throw Error(ErrorCode::kUnknownOp, "layer '" + node.name + "': '" + op_text + "'");
  node.op = *op;
  if (j.contains("inputs")) {
    if (!j.at("inputs").is_array()) invalid(node.name, "'inputs' must be an array");
    for (const auto& in : j.at("inputs")) {
      if (!in.is_string()) invalid(node.name, "inputs must be node names");
      node.inputs.push_back(in.get<std::string>());
    }
  }

  const json attrs = j.value("attrs", json::object());
  if (!attrs.is_object()) invalid(node.name, "'attrs' must be an object");
  const std::string& name = node.name;

  switch (node.op) {
    case OpKind::kInput: {
      check_keys(name, attrs, {"shape"});
      auto s = int_array(name, attrs, "shape", 3, false);
      node.attrs = InputAttrs{{s[0], s[1], s[2]}};
      break;
    }
    case OpKind::kConv2D: {
      check_keys(name, attrs, {"kernel", "stride", "padding", "bias", "weights"});
      auto k = int_array(name, attrs, "kernel", 4, false);
      ConvAttrs c;
      c.kernel.k_h = k[0];
      c.kernel.k_w = k[1];
      c.kernel.k_in = k[2];
      c.kernel.k_out = k[3];
      if (attrs.contains("stride")) {
        auto s = int_array(name, attrs, "stride", 2, false);
        c.kernel.stride_h = s[0];
        c.kernel.stride_w = s[1];
      }
      c.kernel.padding = parse_padding(name, attrs);
      c.bias = attrs.value("bias", false);
      node.attrs = c;
      node.weights = load_weights(name, attrs, base_dir);
      break;
    }
    case OpKind::kDense: {
      check_keys(name, attrs, {"units", "bias", "weights"});
      if (!attrs.contains("units")) invalid(name, "missing 'units'");
      ConvAttrs c;
      c.kernel.k_out = positive(name, attrs.at("units"), "units");
      c.kernel.k_in = 0;  // resolved by shape inference
      c.bias = attrs.value("bias", false);
      node.attrs = c;
      node.weights = load_weights(name, attrs, base_dir);
      break;
    }
    case OpKind::kPad: {
      check_keys(name, attrs, {"pads"});
      auto p = int_array(name, attrs, "pads", 4, true);
      node.attrs = PadAttrs{p[0], p[1], p[2], p[3]};
      break;
    }
    case OpKind::kBiasAdd:
      check_keys(name, attrs, {"weights"});
      node.weights = load_weights(name, attrs, base_dir);
      break;
    case OpKind::kActivation: {
      check_keys(name, attrs, {"function", "alpha"});
      ActivationAttrs a;
      const auto fn = attrs.value("function", std::string("relu"));
      if (fn == "relu") {
        a.fn = ActivationFn::kRelu;
      } else if (fn == "leaky_relu") {
        a.fn = ActivationFn::kLeakyRelu;
      } else if (fn == "linear") {
        a.fn = ActivationFn::kLinear;
      } else if (fn == "sigmoid") {
        a.fn = ActivationFn::kSigmoid;
      } else {
        invalid(name, "unknown activation function '" + fn + "'");
      }
      a.alpha = attrs.value("alpha", 0.1);
      node.attrs = a;
      break;
    }
    case OpKind::kBatchNorm:
      check_keys(name, attrs, {"epsilon", "weights"});
      node.attrs = BatchNormAttrs{attrs.value("epsilon", 1e-3)};
      node.weights = load_weights(name, attrs, base_dir);
      break;
    case OpKind::kMaxPool2D:
    case OpKind::kAvgPool2D: {
      check_keys(name, attrs, {"size", "stride"});
      auto size = int_array(name, attrs, "size", 2, false);
      auto stride = attrs.contains("stride") ? int_array(name, attrs, "stride", 2, false) : size;
      node.attrs = PoolAttrs{size[0], size[1], stride[0], stride[1]};
      break;
    }
    case OpKind::kAdd:
    case OpKind::kOutput:
      check_keys(name, attrs, {});
      break;
    case OpKind::kConcat: {
      check_keys(name, attrs, {"axis"});
      const auto axis = attrs.value("axis", std::string("c"));
      ConcatAttrs c;
      if (axis == "h") {
        c.axis = Axis::kH;
      } else if (axis == "w") {
        c.axis = Axis::kW;
      } else if (axis == "c") {
        c.axis = Axis::kC;
      } else {
        invalid(name, "concat axis must be h, w or c");
      }
      node.attrs = c;
      break;
    }
    case OpKind::kUpsample2D:
      check_keys(name, attrs, {"factor"});
      if (!attrs.contains("factor")) invalid(name, "missing 'factor'");
      node.attrs = UpsampleAttrs{positive(name, attrs.at("factor"), "factor")};
      break;
    case OpKind::kSlice: {
      check_keys(name, attrs, {"begin", "size"});
      auto b = int_array(name, attrs, "begin", 3, true);
      auto s = int_array(name, attrs, "size", 3, false);
      node.attrs = SliceAttrs{{b[0], b[1], b[2]}, {s[0], s[1], s[2]}};
      break;
    }
  }

  const bool needs_inputs = node.op != OpKind::kInput;
  if (needs_inputs && node.inputs.empty()) invalid(name, "op requires at least one input");
  if (!needs_inputs && !node.inputs.empty()) invalid(name, "input nodes take no inputs");
  return node;
}

}  // namespace

NNGraph parse_model(std::string_view file_contents, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(file_contents.begin(), file_contents.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kSyntax, position_of(file_contents, e.byte == 0 ? 0 : e.byte - 1) +
                                        ": " + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::kSyntax, "top level must be an object");
  check_keys("<model>", doc, {"name", "layers"});
  if (!doc.contains("layers") || !doc.at("layers").is_array()) {
    throw Error(ErrorCode::kSyntax, "missing 'layers' array");
  }
  NNGraph graph(doc.value("name", std::string("model")));
  for (const auto& layer : doc.at("layers")) {
    try {
      graph.add_node(parse_layer(layer, base_dir));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kInvalidAttribute, e.what());
    }
  }
  graph.validate();
  return graph;
}

NNGraph load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open model file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_model(buffer.str(), path.parent_path());
}

}  // namespace cimsched::ir
