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

#ifndef CIMSCHED_TESTS_SUPPORT_SUPPORT_H_
#define CIMSCHED_TESTS_SUPPORT_SUPPORT_H_

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cimsched/ir/evaluate.h"
#include "cimsched/ir/graph.h"
#include "cimsched/sched/dependencies.h"
#include "cimsched/sched/schedule.h"
#include "cimsched/sched/sets.h"

namespace cimsched::testing {

using Rng = std::mt19937_64;

// Small fluent graph builder for tests. Node helpers return the node name.
class Builder {
 public:
  explicit Builder(std::string name = "g") : graph_(std::move(name)) {}

  std::string input(const std::string& name, std::int64_t h, std::int64_t w, std::int64_t c);
  std::string conv(const std::string& name, const std::string& in, std::int64_t k, std::int64_t k_in,
                   std::int64_t k_out, std::int64_t stride = 1, ir::Padding padding = {},
                   bool bias = false);
  std::string pool(const std::string& name, const std::string& in, std::int64_t size, std::int64_t stride,
                   bool max = true);
  std::string pad(const std::string& name, const std::string& in, std::int64_t top, std::int64_t bottom,
                  std::int64_t left, std::int64_t right);
  std::string act(const std::string& name, const std::string& in,
                  ir::ActivationFn fn = ir::ActivationFn::kRelu);
  std::string bias_add(const std::string& name, const std::string& in);
  std::string batchnorm(const std::string& name, const std::string& in, double epsilon = 1e-3);
  std::string add(const std::string& name, const std::vector<std::string>& ins);
  std::string concat(const std::string& name, const std::vector<std::string>& ins, ir::Axis axis);
  std::string upsample(const std::string& name, const std::string& in, std::int64_t factor);
  std::string slice(const std::string& name, const std::string& in, std::array<std::int64_t, 3> begin,
                    std::array<std::int64_t, 3> size);
  std::string output(const std::string& name, const std::string& in);

  ir::LayerNode& node(const std::string& name) { return graph_.node(name); }
  [[nodiscard]] const ir::NNGraph& graph() const { return graph_; }
  [[nodiscard]] ir::NNGraph shaped() const;

 private:
  std::string put(ir::LayerNode node);
  ir::NNGraph graph_;
};

// Uniform weights in [-1, 1] for every base layer, bias_add and batchnorm
// that lacks them (batchnorm variances in [0.1, 2]).
void fill_random_weights(ir::NNGraph& graph, Rng& rng);
ir::FeatureMap random_feature_map(const ir::TensorShape& shape, Rng& rng);

// Independent direct convolution over an unpadded input.
ir::FeatureMap direct_conv(const ir::FeatureMap& in, const ir::KernelSpec& k,
                           const std::vector<double>& kernel);

double max_abs_diff(const ir::FeatureMap& a, const ir::FeatureMap& b);

// Exhaustive search for min sum(t/d) s.t. c.d <= F, d >= 1.
double brute_force_duplication_optimum(const std::vector<std::int64_t>& t,
                                       const std::vector<std::int64_t>& c, std::int64_t F);

// Random small canonical graph: conv chains with pads, pools, upsampling,
// slices, residual adds and concats along every axis.
ir::NNGraph random_graph(Rng& rng, int base_layers);

// Data edges (flat ids) derived element by element, without regions.
std::set<std::pair<std::size_t, std::size_t>> brute_force_data_edges(
    const ir::NNGraph& graph, const std::vector<sched::SetPartition>& partitions,
    const sched::SetDependencyGraph& ids);

// Outcome of a property suite: empty detail means success.
struct PropertyResult {
  bool passed = true;
  std::string detail;
  void fail(const std::string& what) {
    if (passed) detail = what;
    passed = false;
  }
};

// Every partition tiles its layer's OFM exactly and respects alignment.
PropertyResult check_set_coverage(const ir::NNGraph& graph,
                                  const std::vector<sched::SetPartition>& partitions);

// Starts respect every edge, durations equal set areas, and no set can be
// moved one cycle earlier.
PropertyResult check_asap(const sched::SetDependencyGraph& deps,
                          const std::vector<sched::SetPartition>& partitions,
                          const sched::Schedule& schedule);

// The property suites run as a whole.
PropertyResult property_set_coverage_on_benchmarks();
PropertyResult property_dependency_oracle(int graphs, std::uint64_t seed);
PropertyResult property_work_conservation();
PropertyResult property_asap_perturbation(int graphs, std::uint64_t seed);
PropertyResult property_schedule_determinism();
PropertyResult property_duplication_equivalence(int convs, std::uint64_t seed);

}  // namespace cimsched::testing

#endif  // CIMSCHED_TESTS_SUPPORT_SUPPORT_H_
