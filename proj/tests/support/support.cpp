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

#include "support.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <tuple>

#include "cimsched/harness/pipeline.h"
#include "cimsched/harness/sweep.h"
#include "cimsched/ir/passes.h"
#include "cimsched/mapping/duplication.h"
#include "cimsched/mapping/mapping.h"
#include "cimsched/sim/simulator.h"

namespace cimsched::testing {

using ir::LayerNode;
using ir::OpKind;

std::string Builder::put(LayerNode node) {
  std::string name = node.name;
  graph_.add_node(std::move(node));
  return name;
}

std::string Builder::input(const std::string& name, std::int64_t h, std::int64_t w, std::int64_t c) {
  LayerNode n;
  n.name = name;
  n.op = OpKind::kInput;
  n.attrs = ir::InputAttrs{{h, w, c}};
  return put(std::move(n));
}

std::string Builder::conv(const std::string& name, const std::string& in, std::int64_t k, std::int64_t k_in,
                          std::int64_t k_out, std::int64_t stride, ir::Padding padding, bool bias) {
  LayerNode n;
  n.name = name;
  n.op = OpKind::kConv2D;
  n.inputs = {in};
  ir::ConvAttrs a;
  a.kernel = {k, k, k_in, k_out, stride, stride, padding};
  a.bias = bias;
  n.attrs = a;
  return put(std::move(n));
}

std::string Builder::pool(const std::string& name, const std::string& in, std::int64_t size,
                          std::int64_t stride, bool max) {
  LayerNode n;
  n.name = name;
  n.op = max ? OpKind::kMaxPool2D : OpKind::kAvgPool2D;
  n.inputs = {in};
  n.attrs = ir::PoolAttrs{size, size, stride, stride};
  return put(std::move(n));
}

std::string Builder::pad(const std::string& name, const std::string& in, std::int64_t top,
                         std::int64_t bottom, std::int64_t left, std::int64_t right) {
  LayerNode n;
  n.name = name;
  n.op = OpKind::kPad;
  n.inputs = {in};
  n.attrs = ir::PadAttrs{top, bottom, left, right};
  return put(std::move(n));
}

std::string Builder::act(const std::string& name, const std::string& in, ir::ActivationFn fn) {
  LayerNode n;
  n.name = name;
  n.op = OpKind::kActivation;
  n.inputs = {in};
  n.attrs = ir::ActivationAttrs{fn, 0.1};
  return put(std::move(n));
}

std::string Builder::bias_add(const std::string& name, const std::string& in) {
  LayerNode n;
  n.name = name;
  n.op = OpKind::kBiasAdd;
  n.inputs = {in};
  return put(std::move(n));
}

std::string Builder::batchnorm(const std::string& name, const std::string& in, double epsilon) {
  LayerNode n;
  n.name = name;
  n.op = OpKind::kBatchNorm;
  n.inputs = {in};
  n.attrs = ir::BatchNormAttrs{epsilon};
  return put(std::move(n));
}

std::string Builder::add(const std::string& name, const std::vector<std::string>& ins) {
  LayerNode n;
  n.name = name;
  n.op = OpKind::kAdd;
  n.inputs = ins;
  return put(std::move(n));
}

std::string Builder::concat(const std::string& name, const std::vector<std::string>& ins, ir::Axis axis) {
  LayerNode n;
  n.name = name;
  n.op = OpKind::kConcat;
  n.inputs = ins;
  n.attrs = ir::ConcatAttrs{axis};
  return put(std::move(n));
}

std::string Builder::upsample(const std::string& name, const std::string& in, std::int64_t factor) {
  LayerNode n;
  n.name = name;
  n.op = OpKind::kUpsample2D;
  n.inputs = {in};
  n.attrs = ir::UpsampleAttrs{factor};
  return put(std::move(n));
}

std::string Builder::slice(const std::string& name, const std::string& in, std::array<std::int64_t, 3> begin,
                           std::array<std::int64_t, 3> size) {
  LayerNode n;
  n.name = name;
  n.op = OpKind::kSlice;
  n.inputs = {in};
  n.attrs = ir::SliceAttrs{begin, size};
  return put(std::move(n));
}

std::string Builder::output(const std::string& name, const std::string& in) {
  LayerNode n;
  n.name = name;
  n.op = OpKind::kOutput;
  n.inputs = {in};
  return put(std::move(n));
}

ir::NNGraph Builder::shaped() const { return ir::infer_shapes(graph_); }

namespace {

std::vector<double> uniform(std::size_t n, double lo, double hi, Rng& rng) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

std::int64_t pick(Rng& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

}  // namespace

void fill_random_weights(ir::NNGraph& graph, Rng& rng) {
  const ir::NNGraph shaped = ir::infer_shapes(graph);
  for (const auto& name : graph.topological_order()) {
    LayerNode& n = graph.node(name);
    if (n.weights) continue;
    auto w = std::make_shared<ir::Weights>();
    const auto channels = static_cast<std::size_t>(shaped.node(name).output_shape().channels);
    if (n.is_base()) {
      const auto& k = shaped.node(name).conv().kernel;
      w->kernel = uniform(static_cast<std::size_t>(k.column_length() * k.k_out), -1.0, 1.0, rng);
      if (n.conv().bias) w->bias = uniform(channels, -1.0, 1.0, rng);
    } else if (n.op == OpKind::kBiasAdd) {
      w->bias = uniform(channels, -1.0, 1.0, rng);
    } else if (n.op == OpKind::kBatchNorm) {
      w->gamma = uniform(channels, 0.5, 1.5, rng);
      w->beta = uniform(channels, -1.0, 1.0, rng);
      w->mean = uniform(channels, -1.0, 1.0, rng);
      w->variance = uniform(channels, 0.1, 2.0, rng);
    } else {
      continue;
    }
    n.weights = std::move(w);
  }
}

ir::FeatureMap random_feature_map(const ir::TensorShape& shape, Rng& rng) {
  ir::FeatureMap m(shape);
  m.data = uniform(m.data.size(), -1.0, 1.0, rng);
  return m;
}

ir::FeatureMap direct_conv(const ir::FeatureMap& in, const ir::KernelSpec& k,
                           const std::vector<double>& kernel) {
  const std::int64_t oh = (in.shape.height - k.k_h) / k.stride_h + 1;
  const std::int64_t ow = (in.shape.width - k.k_w) / k.stride_w + 1;
  ir::FeatureMap out({oh, ow, k.k_out});
  for (std::int64_t y = 0; y < oh; ++y) {
    for (std::int64_t x = 0; x < ow; ++x) {
      for (std::int64_t o = 0; o < k.k_out; ++o) {
        double acc = 0.0;
        for (std::int64_t i = 0; i < k.k_h; ++i) {
          for (std::int64_t j = 0; j < k.k_w; ++j) {
            for (std::int64_t c = 0; c < k.k_in; ++c) {
              acc += in.at(y * k.stride_h + i, x * k.stride_w + j, c) *
                     kernel[static_cast<std::size_t>(((i * k.k_w + j) * k.k_in + c) * k.k_out + o)];
            }
          }
        }
        out.at(y, x, o) = acc;
      }
    }
  }
  return out;
}

double max_abs_diff(const ir::FeatureMap& a, const ir::FeatureMap& b) {
  if (a.shape != b.shape) return std::numeric_limits<double>::infinity();
  double m = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) m = std::max(m, std::abs(a.data[i] - b.data[i]));
  return m;
}

double brute_force_duplication_optimum(const std::vector<std::int64_t>& t,
                                       const std::vector<std::int64_t>& c, std::int64_t F) {
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::int64_t> d(t.size(), 1);
  const std::int64_t base = std::accumulate(c.begin(), c.end(), std::int64_t{0});
  auto rec = [&](auto&& self, std::size_t i, std::int64_t used) -> void {
    if (i == t.size()) {
      double obj = 0.0;
      for (std::size_t k = 0; k < t.size(); ++k) obj += static_cast<double>(t[k]) / static_cast<double>(d[k]);
      best = std::min(best, obj);
      return;
    }
    for (std::int64_t di = 1; used + c[i] * (di - 1) <= F; ++di) {
      d[i] = di;
      self(self, i + 1, used + c[i] * (di - 1));
    }
    d[i] = 1;
  };
  if (base <= F) rec(rec, 0, base);
  return best;
}

ir::NNGraph random_graph(Rng& rng, int base_layers) {
  Builder b("random");
  int counter = 0;
  auto fresh = [&](const char* p) { return std::string(p) + std::to_string(counter++); };

  struct Tensor {
    std::string name;
    ir::TensorShape shape;
  };
  const ir::TensorShape in_shape{pick(rng, 6, 14), pick(rng, 6, 14), pick(rng, 1, 3)};
  Tensor cur{b.input("in", in_shape.height, in_shape.width, in_shape.channels), in_shape};
  int made = 0;
  while (made < base_layers) {
    if (chance(rng, 0.4)) {
      const std::int64_t t = pick(rng, 0, 1), bo = pick(rng, 0, 1), l = pick(rng, 0, 1), r = pick(rng, 0, 1);
      cur = {b.pad(fresh("pad"), cur.name, t, bo, l, r),
             {cur.shape.height + t + bo, cur.shape.width + l + r, cur.shape.channels}};
    }
    const std::int64_t kmax = std::min<std::int64_t>(3, std::min(cur.shape.height, cur.shape.width));
    const std::int64_t k = pick(rng, 1, kmax);
    std::int64_t stride = 1;
    if (chance(rng, 0.3) && (cur.shape.height - k) / 2 + 1 >= 2 && (cur.shape.width - k) / 2 + 1 >= 2) stride = 2;
    const std::int64_t kout = pick(rng, 1, 4);
    const std::string conv = b.conv(fresh("conv"), cur.name, k, cur.shape.channels, kout, stride);
    ++made;
    cur = {conv,
           {(cur.shape.height - k) / stride + 1, (cur.shape.width - k) / stride + 1, kout}};

    if (chance(rng, 0.5)) cur.name = b.act(fresh("act"), cur.name);
    const int spatial = static_cast<int>(pick(rng, 0, 5));
    if (spatial == 0 && cur.shape.height >= 4 && cur.shape.width >= 4) {
      cur = {b.pool(fresh("pool"), cur.name, 2, 2), {cur.shape.height / 2, cur.shape.width / 2, cur.shape.channels}};
    } else if (spatial == 1 && cur.shape.height >= 5 && cur.shape.width >= 5) {
      cur = {b.pool(fresh("pool"), cur.name, 3, 2, false),
             {(cur.shape.height - 3) / 2 + 1, (cur.shape.width - 3) / 2 + 1, cur.shape.channels}};
    } else if (spatial == 2 && cur.shape.height <= 8 && cur.shape.width <= 8) {
      cur = {b.upsample(fresh("up"), cur.name, 2),
             {cur.shape.height * 2, cur.shape.width * 2, cur.shape.channels}};
    } else if (spatial == 3 && cur.shape.height >= 4 && cur.shape.width >= 4) {
      const std::int64_t top = pick(rng, 0, 1), left = pick(rng, 0, 1);
      const std::int64_t h = cur.shape.height - top - pick(rng, 0, 1);
      const std::int64_t w = cur.shape.width - left - pick(rng, 0, 1);
      cur = {b.slice(fresh("slice"), cur.name, {top, left, 0}, {h, w, cur.shape.channels}),
             {h, w, cur.shape.channels}};
    }

    if (made < base_layers && chance(rng, 0.35)) {
      const std::string side = b.conv(fresh("conv"), cur.name, 1, cur.shape.channels, cur.shape.channels);
      ++made;
      switch (pick(rng, 0, 3)) {
        case 0:
          cur.name = b.add(fresh("add"), {cur.name, side});
          break;
        case 1:
          cur = {b.concat(fresh("cat"), {cur.name, side}, ir::Axis::kC),
                 {cur.shape.height, cur.shape.width, cur.shape.channels * 2}};
          break;
        case 2:
          cur = {b.concat(fresh("cat"), {side, cur.name}, ir::Axis::kH),
                 {cur.shape.height * 2, cur.shape.width, cur.shape.channels}};
          break;
        default:
          cur = {b.concat(fresh("cat"), {cur.name, side}, ir::Axis::kW),
                 {cur.shape.height, cur.shape.width * 2, cur.shape.channels}};
          break;
      }
    }
  }
  b.output("out", cur.name);
  return ir::canonicalize(b.shaped());
}

namespace {

using Elem = std::tuple<std::string, std::int64_t, std::int64_t>;

// Input elements one output element of a non-base op reads.
void element_backward(const ir::NNGraph& g, const LayerNode& n, std::int64_t h, std::int64_t w,
                      std::vector<Elem>& out) {
  auto in_shape = [&](std::size_t i) { return g.node(n.inputs[i]).output_shape(); };
  switch (n.op) {
    case OpKind::kPad: {
      const auto& p = std::get<ir::PadAttrs>(n.attrs);
      const auto s = in_shape(0);
      const std::int64_t ih = h - p.top, iw = w - p.left;
      if (ih >= 0 && iw >= 0 && ih < s.height && iw < s.width) out.emplace_back(n.inputs[0], ih, iw);
      return;
    }
    case OpKind::kMaxPool2D:
    case OpKind::kAvgPool2D: {
      const auto& p = std::get<ir::PoolAttrs>(n.attrs);
      for (std::int64_t i = 0; i < p.size_h; ++i) {
        for (std::int64_t j = 0; j < p.size_w; ++j) out.emplace_back(n.inputs[0], h * p.stride_h + i, w * p.stride_w + j);
      }
      return;
    }
    case OpKind::kUpsample2D: {
      const auto f = std::get<ir::UpsampleAttrs>(n.attrs).factor;
      out.emplace_back(n.inputs[0], h / f, w / f);
      return;
    }
    case OpKind::kSlice: {
      const auto& s = std::get<ir::SliceAttrs>(n.attrs);
      out.emplace_back(n.inputs[0], h + s.begin[0], w + s.begin[1]);
      return;
    }
    case OpKind::kConcat: {
      const auto axis = std::get<ir::ConcatAttrs>(n.attrs).axis;
      std::int64_t offset = 0;
      for (std::size_t i = 0; i < n.inputs.size(); ++i) {
        const auto s = in_shape(i);
        if (axis == ir::Axis::kC) {
          out.emplace_back(n.inputs[i], h, w);
        } else if (axis == ir::Axis::kH) {
          if (h >= offset && h < offset + s.height) out.emplace_back(n.inputs[i], h - offset, w);
          offset += s.height;
        } else {
          if (w >= offset && w < offset + s.width) out.emplace_back(n.inputs[i], h, w - offset);
          offset += s.width;
        }
      }
      return;
    }
    case OpKind::kDense:
    case OpKind::kConv2D:
    case OpKind::kInput:
      return;
    default:
      for (const auto& in : n.inputs) out.emplace_back(in, h, w);
      return;
  }
}

}  // namespace

std::set<std::pair<std::size_t, std::size_t>> brute_force_data_edges(
    const ir::NNGraph& graph, const std::vector<sched::SetPartition>& partitions,
    const sched::SetDependencyGraph& ids) {
  std::map<std::string, std::size_t> layer_index;
  for (std::size_t l = 0; l < partitions.size(); ++l) layer_index[partitions[l].layer] = l;

  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t l = 0; l < partitions.size(); ++l) {
    const LayerNode& consumer = graph.node(partitions[l].layer);
    const auto& k = consumer.conv().kernel;
    const auto in = graph.node(consumer.inputs[0]).output_shape();
    for (std::size_t s = 0; s < partitions[l].sets.size(); ++s) {
      const Region& r = partitions[l].sets[s];
      std::set<Elem> seen;
      std::vector<Elem> stack;
      for (std::int64_t h = r.row_begin; h < r.row_end; ++h) {
        for (std::int64_t w = r.col_begin; w < r.col_end; ++w) {
          for (std::int64_t i = 0; i < k.k_h; ++i) {
            for (std::int64_t j = 0; j < k.k_w; ++j) {
              const std::int64_t ih = h * k.stride_h + i, iw = w * k.stride_w + j;
              if (ih < in.height && iw < in.width) stack.emplace_back(consumer.inputs[0], ih, iw);
            }
          }
        }
      }
      while (!stack.empty()) {
        Elem e = stack.back();
        stack.pop_back();
        if (!seen.insert(e).second) continue;
        const LayerNode& n = graph.node(std::get<0>(e));
        if (n.is_base()) {
          const std::size_t pl = layer_index.at(n.name);
          for (std::size_t ps = 0; ps < partitions[pl].sets.size(); ++ps) {
            if (partitions[pl].sets[ps].contains(std::get<1>(e), std::get<2>(e))) {
              edges.emplace(ids.flat_id({pl, ps}), ids.flat_id({l, s}));
            }
          }
          continue;
        }
        element_backward(graph, n, std::get<1>(e), std::get<2>(e), stack);
      }
    }
  }
  return edges;
}

PropertyResult check_set_coverage(const ir::NNGraph& graph,
                                  const std::vector<sched::SetPartition>& partitions) {
  PropertyResult result;
  const auto bases = graph.base_layers();
  if (bases.size() != partitions.size()) {
    result.fail("partition count " + std::to_string(partitions.size()) + " != base layers " +
                std::to_string(bases.size()));
    return result;
  }
  for (std::size_t l = 0; l < partitions.size(); ++l) {
    const auto& p = partitions[l];
    if (p.layer != bases[l]) result.fail("partition order differs at " + p.layer);
    const auto ofm = graph.node(p.layer).output_shape();
    std::vector<int> hits(static_cast<std::size_t>(ofm.spatial()), 0);
    std::int64_t min_area = std::numeric_limits<std::int64_t>::max(), max_area = 0;
    const auto [unit_h, unit_w] = sched::set_alignment(graph, p.layer);
    for (const auto& r : p.sets) {
      if (r.empty() || r.row_begin < 0 || r.col_begin < 0 || r.row_end > ofm.height || r.col_end > ofm.width) {
        result.fail(p.layer + ": set out of bounds");
        continue;
      }
      if (p.sets.size() > 1 && (r.row_begin % unit_h != 0 || r.col_begin % unit_w != 0)) {
        result.fail(p.layer + ": set start not aligned");
      }
      min_area = std::min(min_area, r.area());
      max_area = std::max(max_area, r.area());
      for (std::int64_t h = r.row_begin; h < r.row_end; ++h) {
        for (std::int64_t w = r.col_begin; w < r.col_end; ++w) ++hits[static_cast<std::size_t>(h * ofm.width + w)];
      }
    }
    if (std::any_of(hits.begin(), hits.end(), [](int v) { return v != 1; })) {
      result.fail(p.layer + ": sets do not tile the OFM exactly once");
    }
    if (p.sets.size() > 1 && max_area > 2 * min_area) result.fail(p.layer + ": set areas unbalanced");
  }
  return result;
}

PropertyResult check_asap(const sched::SetDependencyGraph& deps,
                          const std::vector<sched::SetPartition>& partitions,
                          const sched::Schedule& schedule) {
  PropertyResult result;
  const std::size_t n = deps.num_sets();
  if (schedule.sets.size() != n) {
    result.fail("schedule has " + std::to_string(schedule.sets.size()) + " sets, expected " + std::to_string(n));
    return result;
  }
  std::vector<std::vector<std::size_t>> preds(n);
  for (const auto& e : deps.data_edges()) preds[e.to].push_back(e.from);
  for (const auto& e : deps.resource_edges()) preds[e.to].push_back(e.from);
  std::int64_t makespan = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto ref = deps.ref(i);
    const auto& s = schedule.sets[i];
    if (s.end_cycle - s.start_cycle != partitions[ref.layer].cycles(ref.set)) {
      result.fail("set " + std::to_string(i) + " has wrong duration");
    }
    std::int64_t ready = 0;
    for (auto p : preds[i]) ready = std::max(ready, schedule.sets[p].end_cycle);
    if (s.start_cycle < ready) result.fail("set " + std::to_string(i) + " starts before a predecessor ends");
    // One cycle earlier must break some constraint.
    const std::int64_t earlier = s.start_cycle - 1;
    if (earlier >= 0 && earlier >= ready) result.fail("set " + std::to_string(i) + " could start earlier");
    makespan = std::max(makespan, s.end_cycle);
  }
  if (makespan != schedule.makespan) result.fail("makespan mismatch");
  return result;
}

PropertyResult property_set_coverage_on_benchmarks() {
  PropertyResult result;
  for (const auto& name : harness::default_benchmarks()) {
    const ir::NNGraph g = harness::load_benchmark(name);
    for (std::int64_t target : {sched::kFinestSets, std::int64_t{16}, std::int64_t{1}}) {
      const auto r = check_set_coverage(g, sched::determine_sets(g, target));
      if (!r.passed) result.fail(name + " (target " + std::to_string(target) + "): " + r.detail);
    }
  }
  return result;
}

PropertyResult property_dependency_oracle(int graphs, std::uint64_t seed) {
  PropertyResult result;
  Rng rng(seed);
  const std::int64_t targets[] = {1, 2, 4, 6, 9, 16, sched::kFinestSets};
  for (int i = 0; i < graphs; ++i) {
    const ir::NNGraph g = random_graph(rng, static_cast<int>(pick(rng, 2, 6)));
    const auto parts = sched::determine_sets(g, targets[pick(rng, 0, 6)]);
    const auto deps = sched::determine_dependencies(g, parts);
    std::set<std::pair<std::size_t, std::size_t>> actual;
    for (const auto& e : deps.data_edges()) actual.emplace(e.from, e.to);
    const auto expected = brute_force_data_edges(g, parts, deps);
    if (actual != expected) {
      result.fail("graph " + std::to_string(i) + ": " + std::to_string(actual.size()) + " edges vs oracle " +
                  std::to_string(expected.size()));
    }
    if (deps.data_edges().size() != actual.size()) result.fail("graph " + std::to_string(i) + ": duplicate edges");
  }
  return result;
}

PropertyResult property_work_conservation() {
  PropertyResult result;
  for (const auto& name : harness::default_benchmarks()) {
    const ir::NNGraph g = harness::load_benchmark(name);
    for (std::int64_t x : {0, 16}) {
      harness::RunConfig a;
      a.extra_pes = x;
      a.mode = x == 0 ? harness::Mode::kLayerByLayer : harness::Mode::kWdup;
      harness::RunConfig b = a;
      b.mode = x == 0 ? harness::Mode::kXinf : harness::Mode::kWdupXinf;
      const auto ra = harness::run_configuration(g, a);
      const auto rb = harness::run_configuration(g, b);
      if (ra.report.active_pe_cycles() != rb.report.active_pe_cycles()) {
        result.fail(name + " x=" + std::to_string(x) + ": " + std::to_string(ra.report.active_pe_cycles()) +
                    " vs " + std::to_string(rb.report.active_pe_cycles()));
      }
    }
  }
  return result;
}

PropertyResult property_asap_perturbation(int graphs, std::uint64_t seed) {
  PropertyResult result;
  Rng rng(seed);
  const std::int64_t targets[] = {1, 4, 9, 16, sched::kFinestSets};
  for (int i = 0; i < graphs; ++i) {
    ir::NNGraph g = random_graph(rng, static_cast<int>(pick(rng, 2, 6)));
    if (chance(rng, 0.5)) {
      const auto bases = g.base_layers();
      const std::string& victim = bases[static_cast<std::size_t>(pick(rng, 0, static_cast<std::int64_t>(bases.size()) - 1))];
      const std::int64_t d = std::min<std::int64_t>(pick(rng, 2, 4), g.node(victim).output_shape().spatial());
      if (d >= 2) g = mapping::apply_duplication(g, {{victim, d}});
    }
    const auto plan = mapping::map_graph(g, mapping::ArchConfig{});
    const auto parts = sched::determine_sets(g, targets[pick(rng, 0, 4)]);
    const auto deps = sched::determine_dependencies(g, parts);
    const auto r = check_asap(deps, parts, sched::schedule_asap(deps, parts, plan));
    if (!r.passed) result.fail("graph " + std::to_string(i) + ": " + r.detail);
  }
  return result;
}

PropertyResult property_schedule_determinism() {
  PropertyResult result;
  const ir::NNGraph g = harness::load_benchmark("tinyyolov4");
  harness::RunConfig rc;
  rc.mode = harness::Mode::kWdupXinf;
  rc.extra_pes = 16;
  const auto a = harness::run_configuration(g, rc).schedule.to_json();
  const auto b = harness::run_configuration(g, rc).schedule.to_json();
  if (a != b) result.fail("tinyyolov4 wdup+16 xinf schedule differs between runs");

  harness::SweepConfig sc;
  sc.benchmarks = {"tinyyolov4", "vgg16"};
  sc.extra_pes = {4};
  sc.sets_per_layer = 16;
  sc.threads = 1;
  const auto csv1 = harness::rows_to_csv(harness::run_sweep(sc));
  sc.threads = 3;
  const auto csv2 = harness::rows_to_csv(harness::run_sweep(sc));
  if (csv1 != csv2) result.fail("sweep CSV differs between runs");
  return result;
}

PropertyResult property_duplication_equivalence(int convs, std::uint64_t seed) {
  PropertyResult result;
  Rng rng(seed);
  for (int i = 0; i < convs; ++i) {
    const std::int64_t h = pick(rng, 3, 12), w = pick(rng, 3, 12), c = pick(rng, 1, 3);
    const std::int64_t k = pick(rng, 1, std::min<std::int64_t>(3, std::min(h, w)));
    const std::int64_t stride = pick(rng, 1, 2);
    const std::int64_t kout = pick(rng, 1, 3);
    Builder b;
    b.input("x", h, w, c);
    b.conv("conv", "x", k, c, kout, stride);
    b.output("y", "conv");
    ir::NNGraph g = b.shaped();
    fill_random_weights(g, rng);
    const std::int64_t outputs = g.node("conv").output_shape().spatial();
    const std::int64_t d = std::min<std::int64_t>(pick(rng, 2, 6), outputs);
    if (d < 2) continue;
    const ir::NNGraph dup = mapping::apply_duplication(g, {{"conv", d}});

    const auto input = random_feature_map({h, w, c}, rng);
    const auto ref = direct_conv(input, g.node("conv").conv().kernel, g.node("conv").weights->kernel);
    const auto got = ir::evaluate(dup, {{"x", input}}).at("y");
    const double diff = max_abs_diff(ref, got);
    if (!(diff <= 1e-9)) {
      result.fail("conv " + std::to_string(i) + " (d=" + std::to_string(d) + "): max diff " + std::to_string(diff));
    }
    std::int64_t replicas = 0;
    for (const auto& n : dup.nodes()) replicas += (n.is_base() && n.origin == "conv") ? 1 : 0;
    if (replicas != d) result.fail("conv " + std::to_string(i) + ": expected " + std::to_string(d) + " replicas");
  }
  return result;
}

}  // namespace cimsched::testing
