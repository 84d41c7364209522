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

#include "cimsched/sched/dependencies.h"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "cimsched/error.h"
#include "cimsched/ir/passes.h"

namespace cimsched::sched {

namespace {

std::optional<Region> clip(Region r, std::int64_t rows, std::int64_t cols) {
  return intersect(r, whole_region(rows, cols));
}

using Runs = std::vector<std::pair<std::int64_t, std::int64_t>>;

// Input runs read by outputs [o0, o1) of a window K/S: [o*S - pad, o*S + K - pad),
// merged where they touch. K < S leaves gaps.
Runs window_runs(std::int64_t o0, std::int64_t o1, std::int64_t k, std::int64_t s, std::int64_t pad) {
  if (k >= s) return {{o0 * s - pad, (o1 - 1) * s + k - pad}};
  Runs runs;
  for (std::int64_t o = o0; o < o1; ++o) runs.emplace_back(o * s - pad, o * s + k - pad);
  return runs;
}

std::vector<Region> window_pieces(const Region& out, std::int64_t k_h, std::int64_t k_w, std::int64_t s_h,
                                  std::int64_t s_w, std::int64_t pad_top, std::int64_t pad_left,
                                  const ir::TensorShape& in) {
  std::vector<Region> pieces;
  for (const auto& [r0, r1] : window_runs(out.row_begin, out.row_end, k_h, s_h, pad_top)) {
    for (const auto& [c0, c1] : window_runs(out.col_begin, out.col_end, k_w, s_w, pad_left)) {
      if (auto r = clip({r0, r1, c0, c1}, in.height, in.width)) pieces.push_back(*r);
    }
  }
  return pieces;
}

std::vector<Region> single(std::optional<Region> r) {
  return r ? std::vector<Region>{*r} : std::vector<Region>{};
}

// Exact input requirement per input as a union of rectangles.
std::vector<std::vector<Region>> backward_pieces(const ir::NNGraph& graph, const ir::LayerNode& op,
                                                 const Region& out_region) {
  using ir::OpKind;
  std::vector<std::vector<Region>> result;
  if (out_region.empty()) {
    result.assign(op.inputs.size(), {});
    return result;
  }
  auto input_shape = [&](std::size_t i) { return graph.node(op.inputs.at(i)).output_shape(); };

  switch (op.op) {
    case OpKind::kInput:
      return result;
    case OpKind::kConv2D: {
      const ir::TensorShape in = input_shape(0);
      const ir::KernelSpec& k = op.conv().kernel;
      ir::Padding pad = k.padding;
      if (pad.mode == ir::PaddingMode::kSame) pad = ir::same_padding(in, k);
      result.push_back(window_pieces(out_region, k.k_h, k.k_w, k.stride_h, k.stride_w, pad.top, pad.left, in));
      return result;
    }
    case OpKind::kDense: {
      const ir::TensorShape in = input_shape(0);
      result.push_back({whole_region(in.height, in.width)});
      return result;
    }
    case OpKind::kMaxPool2D:
    case OpKind::kAvgPool2D: {
      const ir::TensorShape in = input_shape(0);
      const auto& p = std::get<ir::PoolAttrs>(op.attrs);
      result.push_back(window_pieces(out_region, p.size_h, p.size_w, p.stride_h, p.stride_w, 0, 0, in));
      return result;
    }
    case OpKind::kPad: {
      const ir::TensorShape in = input_shape(0);
      const auto& p = std::get<ir::PadAttrs>(op.attrs);
      const Region r{out_region.row_begin - p.top, out_region.row_end - p.top,
                     out_region.col_begin - p.left, out_region.col_end - p.left};
      result.push_back(single(clip(r, in.height, in.width)));
      return result;
    }
    case OpKind::kUpsample2D: {
      const ir::TensorShape in = input_shape(0);
      const auto f = std::get<ir::UpsampleAttrs>(op.attrs).factor;
      const Region r{out_region.row_begin / f, (out_region.row_end + f - 1) / f,
                     out_region.col_begin / f, (out_region.col_end + f - 1) / f};
      result.push_back(single(clip(r, in.height, in.width)));
      return result;
    }
    case OpKind::kSlice: {
      const ir::TensorShape in = input_shape(0);
      const auto& s = std::get<ir::SliceAttrs>(op.attrs);
      const Region r{out_region.row_begin + s.begin[0], out_region.row_end + s.begin[0],
                     out_region.col_begin + s.begin[1], out_region.col_end + s.begin[1]};
      result.push_back(single(clip(r, in.height, in.width)));
      return result;
    }
    case OpKind::kBiasAdd:
    case OpKind::kActivation:
    case OpKind::kBatchNorm:
    case OpKind::kOutput:
    case OpKind::kAdd:
      for (std::size_t i = 0; i < op.inputs.size(); ++i) {
        const ir::TensorShape in = input_shape(i);
        result.push_back(single(clip(out_region, in.height, in.width)));
      }
      return result;
    case OpKind::kConcat: {
      const ir::Axis axis = std::get<ir::ConcatAttrs>(op.attrs).axis;
      std::int64_t offset = 0;
      for (std::size_t i = 0; i < op.inputs.size(); ++i) {
        const ir::TensorShape in = input_shape(i);
        Region r = out_region;
        if (axis == ir::Axis::kH) {
          r.row_begin -= offset;
          r.row_end -= offset;
          offset += in.height;
        } else if (axis == ir::Axis::kW) {
          r.col_begin -= offset;
          r.col_end -= offset;
          offset += in.width;
        }
        result.push_back(single(clip(r, in.height, in.width)));
      }
      return result;
    }
  }
  throw Error(ErrorCode::kUnsupportedOp, "no region semantics for '" + op.name + "'");
}

}  // namespace

std::vector<std::optional<Region>> region_backward(const ir::NNGraph& graph,
                                                   const ir::LayerNode& op,
                                                   const Region& out_region) {
  std::vector<std::optional<Region>> hulls;
  for (const auto& pieces : backward_pieces(graph, op, out_region)) {
    std::optional<Region> hull;
    for (const auto& r : pieces) {
      hull = hull ? Region{std::min(hull->row_begin, r.row_begin), std::max(hull->row_end, r.row_end),
                           std::min(hull->col_begin, r.col_begin), std::max(hull->col_end, r.col_end)}
                  : r;
    }
    hulls.push_back(hull);
  }
  return hulls;
}

SetDependencyGraph::SetDependencyGraph(const std::vector<SetPartition>& partitions) {
  for (std::size_t l = 0; l < partitions.size(); ++l) {
    offsets_.push_back(refs_.size());
    for (std::size_t s = 0; s < partitions[l].sets.size(); ++s) refs_.push_back({l, s});
  }
  p_.assign(refs_.size(), 0);
  q_.assign(refs_.size(), 0);
}

void SetDependencyGraph::add_data_edge(std::size_t from, std::size_t to) {
  data_edges_.push_back({from, to});
  ++q_[from];
  ++p_[to];
}

void SetDependencyGraph::add_resource_edge(std::size_t from, std::size_t to) {
  resource_edges_.push_back({from, to});
}

std::string SetDependencyGraph::to_dot(const std::vector<SetPartition>& partitions) const {
  std::ostringstream os;
  os << "digraph sets {\n  rankdir=LR;\n  node [shape=box, fontsize=10];\n";
  for (std::size_t i = 0; i < refs_.size(); ++i) {
    const SetRef r = refs_[i];
    os << "  s" << i << " [label=\"" << partitions[r.layer].layer << "\\nset " << r.set << " "
       << partitions[r.layer].sets[r.set] << "\"];\n";
  }
  for (const auto& e : resource_edges_) {
    os << "  s" << e.from << " -> s" << e.to << " [color=orange];\n";
  }
  for (const auto& e : data_edges_) os << "  s" << e.from << " -> s" << e.to << ";\n";
  os << "}\n";
  return os.str();
}

std::vector<ProducerRegion> propagate_to_producers(const ir::NNGraph& graph,
                                                   const std::string& from, const Region& region) {
  std::vector<ProducerRegion> out;
  struct Item {
    std::string node;
    Region region;
  };
  std::vector<Item> stack{{from, region}};
  while (!stack.empty()) {
    Item item = std::move(stack.back());
    stack.pop_back();
    const ir::LayerNode& n = graph.node(item.node);
    if (n.is_base()) {
      out.push_back({item.node, item.region});
      continue;
    }
    if (n.op == ir::OpKind::kInput) continue;
    const auto pieces = backward_pieces(graph, n, item.region);
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      for (const auto& r : pieces[i]) stack.push_back({n.inputs[i], r});
    }
  }
  return out;
}

SetDependencyGraph determine_dependencies(const ir::NNGraph& graph,
                                          const std::vector<SetPartition>& partitions) {
  SetDependencyGraph deps(partitions);
  std::unordered_map<std::string, std::size_t> layer_index;
  for (std::size_t l = 0; l < partitions.size(); ++l) layer_index.emplace(partitions[l].layer, l);

  std::vector<SetDependencyGraph::Edge> edges;
  for (std::size_t l = 0; l < partitions.size(); ++l) {
    const ir::LayerNode& consumer = graph.node(partitions[l].layer);
    for (std::size_t s = 0; s < partitions[l].sets.size(); ++s) {
      const std::size_t to = deps.flat_id({l, s});
      const auto ifm = backward_pieces(graph, consumer, partitions[l].sets[s]);
      std::vector<ProducerRegion> needs;
      for (std::size_t i = 0; i < ifm.size(); ++i) {
        for (const auto& piece : ifm[i]) {
          for (auto& need : propagate_to_producers(graph, consumer.inputs[i], piece)) needs.push_back(std::move(need));
        }
      }
      for (const auto& [producer, need] : needs) {
        auto it = layer_index.find(producer);
        if (it == layer_index.end()) {
          throw Error(ErrorCode::kUnsupportedOp, "producer '" + producer + "' has no set partition");
        }
        const SetPartition& prod = partitions[it->second];
        for (std::size_t ps = 0; ps < prod.sets.size(); ++ps) {
          if (intersect(prod.sets[ps], need)) edges.push_back({deps.flat_id({it->second, ps}), to});
        }
      }
    }
  }
  std::sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) {
    return std::pair{a.to, a.from} < std::pair{b.to, b.from};
  });
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  for (const auto& e : edges) deps.add_data_edge(e.from, e.to);

  for (std::size_t l = 0; l < partitions.size(); ++l) {
    const auto order = order_sets(partitions[l]);
    for (std::size_t k = 1; k < order.size(); ++k) {
      deps.add_resource_edge(deps.flat_id({l, order[k - 1]}), deps.flat_id({l, order[k]}));
    }
  }
  return deps;
}

}  // namespace cimsched::sched
