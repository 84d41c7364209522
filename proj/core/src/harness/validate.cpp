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

#include "cimsched/harness/validate.h"

#include <cstdio>
#include <sstream>

#include "cimsched/error.h"
#include "cimsched/mapping/mapping.h"

namespace cimsched::harness {

namespace {

struct ModelFigures {
  const char* name;
  ir::TensorShape input;
  std::int64_t base_layers;  // 0 skips the count check
  std::int64_t pe_min;
};

struct LayerFigures {
  const char* layer;
  ir::TensorShape ifm;
  ir::TensorShape ofm;
  std::int64_t pe_count;
  std::int64_t t_init;
};

constexpr ModelFigures kModels[] = {
    {"tinyyolov4", {416, 416, 3}, 0, 117},   {"tinyyolov3", {416, 416, 3}, 13, 142},
    {"vgg16", {224, 224, 3}, 13, 233},       {"vgg19", {224, 224, 3}, 16, 314},
    {"resnet50", {224, 224, 3}, 53, 390},    {"resnet101", {224, 224, 3}, 104, 679},
    {"resnet152", {224, 224, 3}, 155, 936},
};

constexpr LayerFigures kTinyYoloV4Layers[] = {
    {"conv2d", {417, 417, 3}, {208, 208, 32}, 1, 43264},
    {"conv2d_1", {209, 209, 32}, {104, 104, 64}, 2, 10816},
    {"conv2d_2", {106, 106, 64}, {104, 104, 64}, 3, 10816},
    {"conv2d_16", {15, 15, 256}, {13, 13, 512}, 18, 169},
    {"conv2d_20", {26, 26, 256}, {26, 26, 255}, 1, 676},
    {"conv2d_17", {13, 13, 512}, {13, 13, 255}, 2, 169},
};

void add(ValidationReport& report, std::string bench, std::string check, std::string expected,
         std::string actual) {
  const bool ok = expected == actual;
  report.entries.push_back({std::move(bench), std::move(check), std::move(expected), std::move(actual), ok});
}

void fail(ValidationReport& report, std::string bench, std::string check, std::string expected,
          std::string why) {
  report.entries.push_back({std::move(bench), std::move(check), std::move(expected), std::move(why), false});
}

std::string shape_text(const std::optional<ir::TensorShape>& s) {
  return s ? ir::to_string(*s) : std::string("?");
}

}  // namespace

bool ValidationReport::all_passed() const {
  for (const auto& e : entries) {
    if (!e.passed) return false;
  }
  return !entries.empty();
}

std::string ValidationReport::to_table() const {
  std::ostringstream os;
  char line[512];
  std::snprintf(line, sizeof(line), "%-12s %-28s %-22s %-22s %s\n", "benchmark", "check", "expected",
                "actual", "result");
  os << line;
  for (const auto& e : entries) {
    std::snprintf(line, sizeof(line), "%-12s %-28s %-22s %-22s %s\n", e.benchmark.c_str(), e.check.c_str(),
                  e.expected.c_str(), e.actual.c_str(), e.passed ? "ok" : "MISMATCH");
    os << line;
  }
  return os.str();
}

ValidationReport validate_models(const std::filesystem::path& models_dir) {
  ValidationReport report;
  const mapping::ArchConfig arch;
  for (const auto& m : kModels) {
    ir::NNGraph graph;
    try {
      graph = load_benchmark(m.name, models_dir);
    } catch (const std::exception& e) {
      fail(report, m.name, "load", "ok", e.what());
      continue;
    }

    std::optional<ir::TensorShape> input;
    for (const auto& n : graph.nodes()) {
      if (n.op == ir::OpKind::kInput) {
        input = n.shape;
        break;
      }
    }
    add(report, m.name, "input shape", ir::to_string(m.input), shape_text(input));
    if (m.base_layers > 0) {
      add(report, m.name, "base layers", std::to_string(m.base_layers),
          std::to_string(graph.base_layers().size()));
    }
    add(report, m.name, "PE_min", std::to_string(m.pe_min),
        std::to_string(mapping::min_pe_requirement(graph, arch)));

    if (std::string_view(m.name) != "tinyyolov4") continue;
    for (const auto& l : kTinyYoloV4Layers) {
      const std::string prefix = std::string(l.layer) + " ";
      if (!graph.contains(l.layer) || !graph.node(l.layer).is_base()) {
        fail(report, m.name, prefix + "present", "base layer", "missing");
        continue;
      }
      const auto& node = graph.node(l.layer);
      const auto& ifm = graph.node(node.inputs.at(0)).shape;
      add(report, m.name, prefix + "ifm", ir::to_string(l.ifm), shape_text(ifm));
      add(report, m.name, prefix + "ofm", ir::to_string(l.ofm), shape_text(node.shape));
      add(report, m.name, prefix + "PEs", std::to_string(l.pe_count),
          std::to_string(mapping::pe_count(node.conv().kernel, arch).pe_count));
      add(report, m.name, prefix + "t_init", std::to_string(l.t_init),
          node.shape ? std::to_string(mapping::intra_layer_latency(*node.shape)) : std::string("?"));
    }
  }
  return report;
}

}  // namespace cimsched::harness
