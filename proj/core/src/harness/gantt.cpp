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

#include "cimsched/harness/gantt.h"

#include <algorithm>
#include <array>
#include <cstdio>
#include <map>
#include <sstream>

namespace cimsched::harness {

namespace {

constexpr double kLeft = 160.0;
constexpr double kTop = 30.0;
constexpr double kPlotWidth = 1000.0;
constexpr double kLane = 14.0;
constexpr double kAxisHeight = 40.0;

constexpr std::array<const char*, 10> kPalette = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2",
                                                  "#59a14f", "#edc948", "#b07aa1", "#ff9da7",
                                                  "#9c755f", "#bab0ac"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string emit_gantt(const sched::Schedule& schedule, const mapping::MappingPlan& plan) {
  // Lanes follow the mapping order: layers, then replicas.
  std::vector<std::string> lanes;
  std::map<std::string, std::size_t> lane_of;
  std::map<std::string, std::size_t> layer_color;
  std::vector<std::string> lane_nodes;
  for (std::size_t l = 0; l < plan.layers.size(); ++l) {
    const auto& layer = plan.layers[l];
    for (const auto& r : layer.replicas) {
      const bool used = std::any_of(schedule.sets.begin(), schedule.sets.end(),
                                    [&](const auto& s) { return s.node == r.node; });
      if (!used) continue;
      lane_of[r.node] = lanes.size();
      lane_nodes.push_back(r.node);
      layer_color[r.node] = l % kPalette.size();
      lanes.push_back(layer.replicas.size() > 1 ? layer.layer + " #" + std::to_string(&r - layer.replicas.data())
                                                : layer.layer);
    }
  }

  const double height = kTop + kLane * static_cast<double>(lanes.size()) + kAxisHeight;
  const double width = kLeft + kPlotWidth + 40.0;
  const double span = static_cast<double>(std::max<std::int64_t>(schedule.makespan, 1));
  auto x_of = [&](std::int64_t cycle) { return kLeft + kPlotWidth * static_cast<double>(cycle) / span; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\""
     << num(height) << "\" font-family=\"sans-serif\" font-size=\"10\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << num(width) << "\" height=\"" << num(height)
     << "\" fill=\"white\"/>\n";

  for (std::size_t i = 0; i < lanes.size(); ++i) {
    const double y = kTop + kLane * static_cast<double>(i);
    os << "<text x=\"" << num(kLeft - 6.0) << "\" y=\"" << num(y + kLane * 0.75)
       << "\" text-anchor=\"end\">" << escape(lanes[i]) << "</text>\n";
  }
  // Back-to-back sets on one lane are drawn as a single bar.
  struct Bar {
    std::int64_t start;
    std::int64_t end;
    std::int64_t first_set;
    std::int64_t last_set;
  };
  std::vector<std::vector<Bar>> bars(lanes.size());
  std::vector<std::string> bar_layer(lanes.size());
  for (const auto& s : schedule.sets) {
    auto it = lane_of.find(s.node);
    if (it == lane_of.end()) continue;
    auto& lane = bars[it->second];
    bar_layer[it->second] = s.layer;
    if (!lane.empty() && lane.back().end == s.start_cycle) {
      lane.back().end = s.end_cycle;
      lane.back().last_set = s.set_index;
    } else {
      lane.push_back({s.start_cycle, s.end_cycle, s.set_index, s.set_index});
    }
  }
  for (std::size_t i = 0; i < bars.size(); ++i) {
    const double y = kTop + kLane * static_cast<double>(i) + 1.0;
    const std::string& node = lane_nodes[i];
    for (const auto& b : bars[i]) {
      const double x0 = x_of(b.start);
      const double w = std::max(x_of(b.end) - x0, 0.5);
      os << "<rect x=\"" << num(x0) << "\" y=\"" << num(y) << "\" width=\"" << num(w)
         << "\" height=\"" << num(kLane - 2.0) << "\" fill=\"" << kPalette[layer_color[node]]
         << "\" stroke=\"white\" stroke-width=\"0.3\"><title>" << escape(bar_layer[i]) << " sets "
         << b.first_set << "-" << b.last_set << " [" << b.start << ", " << b.end << ")</title></rect>\n";
    }
  }

  const double axis_y = kTop + kLane * static_cast<double>(lanes.size()) + 4.0;
  os << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(axis_y) << "\" x2=\"" << num(kLeft + kPlotWidth)
     << "\" y2=\"" << num(axis_y) << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(kLeft)
     << "\" y2=\"" << num(axis_y) << "\" stroke=\"black\"/>\n";
  constexpr int kTicks = 5;
  for (int t = 0; t <= kTicks; ++t) {
    const std::int64_t cycle = schedule.makespan * t / kTicks;
    const double x = x_of(cycle);
    os << "<line x1=\"" << num(x) << "\" y1=\"" << num(axis_y) << "\" x2=\"" << num(x) << "\" y2=\""
       << num(axis_y + 4.0) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << num(x) << "\" y=\"" << num(axis_y + 16.0) << "\" text-anchor=\"middle\">"
       << cycle << "</text>\n";
  }
  os << "<text x=\"" << num(kLeft + kPlotWidth / 2.0) << "\" y=\"" << num(axis_y + 32.0)
     << "\" text-anchor=\"middle\">cycles</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace cimsched::harness
