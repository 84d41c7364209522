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

#include <gtest/gtest.h>

#include <numeric>

#include "cimsched/error.h"
#include "cimsched/harness/pipeline.h"
#include "cimsched/mapping/duplication.h"
#include "cimsched/mapping/mapping.h"
#include "support.h"

namespace cimsched {
namespace {

using mapping::ArchConfig;
using mapping::SolverMode;
using testing::Builder;

TEST(PeCount, TableRows) {
  const ArchConfig arch;
  EXPECT_EQ(mapping::pe_count({3, 3, 3, 32, 2, 2, {}}, arch), (mapping::Tiling{1, 1, 1}));
  EXPECT_EQ(mapping::pe_count({3, 3, 64, 64, 1, 1, {}}, arch), (mapping::Tiling{3, 1, 3}));
  EXPECT_EQ(mapping::pe_count({1, 1, 512, 255, 1, 1, {}}, arch), (mapping::Tiling{2, 1, 2}));
  EXPECT_EQ(mapping::pe_count({3, 3, 256, 512, 1, 1, {}}, arch).pe_count, 18);
}

TEST(PeCount, SmallCrossbar) {
  ArchConfig arch;
  arch.pe_rows = 16;
  arch.pe_cols = 8;
  // 27 column entries over N=8 rows of tiles, 32 outputs over M=16.
  EXPECT_EQ(mapping::pe_count({3, 3, 3, 32, 1, 1, {}}, arch), (mapping::Tiling{4, 2, 8}));
}

TEST(IntraLayerLatency, Examples) {
  EXPECT_EQ(mapping::intra_layer_latency({208, 208, 32}), 43264);
  EXPECT_EQ(mapping::intra_layer_latency({13, 13, 512}), 169);
  EXPECT_EQ(mapping::intra_layer_latency({1, 1, 7}), 1);
}

TEST(MinPeRequirement, Examples) {
  const ArchConfig arch;
  EXPECT_EQ(mapping::min_pe_requirement(harness::load_benchmark("tinyyolov4"), arch), 117);
  EXPECT_EQ(mapping::min_pe_requirement(harness::load_benchmark("vgg16"), arch), 233);
  Builder b;
  b.input("x", 8, 8, 3);
  b.conv("c", "x", 3, 3, 32);
  EXPECT_EQ(mapping::min_pe_requirement(b.shaped(), arch), 1);
}

TEST(MapGraph, DisjointContiguousRanges) {
  const auto g = harness::load_benchmark("tinyyolov3");
  ArchConfig arch;
  arch.num_pe = 150;
  const auto plan = mapping::map_graph(g, arch);
  EXPECT_EQ(plan.pe_min, 142);
  EXPECT_EQ(plan.total_pe_used, 142);
  std::int64_t next = 0;
  for (const auto& l : plan.layers) {
    EXPECT_EQ(l.pes.begin, next);
    EXPECT_EQ(l.pes.size(), l.pe_count * l.duplicates);
    EXPECT_EQ(l.pe_count, l.tiles_v * l.tiles_h);
    next = l.pes.end;
  }
  EXPECT_EQ(next, plan.total_pe_used);
  EXPECT_LE(plan.total_pe_used, arch.num_pe);
}

TEST(MapGraph, Infeasible) {
  ArchConfig arch;
  arch.num_pe = 100;
  try {
    (void)mapping::map_graph(harness::load_benchmark("tinyyolov4"), arch);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInfeasible);
  }
}

TEST(SolveDuplication, Examples) {
  const std::vector<std::int64_t> t1{100}, c1{1};
  EXPECT_EQ(mapping::solve_duplication(t1, c1, 4), (std::vector<std::int64_t>{4}));
  const std::vector<std::int64_t> t2{100, 10}, c2{1, 1};
  for (auto mode : {SolverMode::kGreedy, SolverMode::kExact}) {
    const auto d = mapping::solve_duplication(t2, c2, 3, mode);
    EXPECT_EQ(d, (std::vector<std::int64_t>{2, 1}));
    EXPECT_DOUBLE_EQ(mapping::duplication_objective(t2, d), 60.0);
  }
  const std::vector<std::int64_t> t3{5, 7, 9}, c3{2, 3, 1};
  EXPECT_EQ(mapping::solve_duplication(t3, c3, 6), (std::vector<std::int64_t>{1, 1, 1}));
}

TEST(SolveDuplication, Infeasible) {
  const std::vector<std::int64_t> t{5, 7}, c{2, 3};
  try {
    (void)mapping::solve_duplication(t, c, 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInfeasible);
  }
}

TEST(SolveDuplication, ExactMatchesBruteForce) {
  testing::Rng rng(11);
  std::uniform_int_distribution<int> n_dist(1, 4), c_dist(1, 3), t_dist(1, 500);
  for (int i = 0; i < 50; ++i) {
    std::vector<std::int64_t> t(static_cast<std::size_t>(n_dist(rng))), c(t.size());
    for (std::size_t k = 0; k < t.size(); ++k) {
      t[k] = t_dist(rng);
      c[k] = c_dist(rng);
    }
    const std::int64_t F = std::accumulate(c.begin(), c.end(), std::int64_t{0}) + i % 9;
    const double opt = testing::brute_force_duplication_optimum(t, c, F);
    const auto d = mapping::solve_duplication(t, c, F, SolverMode::kExact);
    EXPECT_NEAR(mapping::duplication_objective(t, d), opt, 1e-9 * opt);
  }
}

TEST(PartGrid, WidthFirst) {
  EXPECT_EQ(mapping::choose_part_grid(3, {6, 6, 1}).rows, 1);
  EXPECT_EQ(mapping::choose_part_grid(3, {6, 6, 1}).cols, 3);
  EXPECT_EQ(mapping::choose_part_grid(4, {4, 4, 1}).cols, 4);
  const auto narrow = mapping::choose_part_grid(4, {4, 2, 1});
  EXPECT_EQ(narrow.rows, 2);
  EXPECT_EQ(narrow.cols, 2);
}

TEST(SplitOutput, BalancedColumns) {
  const auto parts = mapping::split_output(3, {5, 8, 1});
  ASSERT_EQ(parts.size(), 3u);
  std::int64_t area = 0;
  for (const auto& r : parts) {
    EXPECT_EQ(r.rows(), 5);
    EXPECT_GE(r.cols(), 2);
    EXPECT_LE(r.cols(), 3);
    area += r.area();
  }
  EXPECT_EQ(area, 40);
}

TEST(ApplyDuplication, IdentityForSingleCopies) {
  Builder b;
  b.input("x", 6, 6, 2);
  b.conv("c", "x", 3, 2, 3);
  b.output("y", "c");
  const auto g = b.shaped();
  const auto same = mapping::apply_duplication(g, {{"c", 1}});
  EXPECT_EQ(same.size(), g.size());
}

TEST(ApplyDuplication, FourReplicasOnPaddedInput) {
  Builder b;
  b.input("x", 4, 4, 2);
  b.pad("p", "x", 1, 1, 1, 1);
  b.conv("c", "p", 3, 2, 5);
  b.output("y", "c");
  ir::NNGraph g = b.shaped();
  testing::Rng rng(3);
  testing::fill_random_weights(g, rng);
  const auto dup = mapping::apply_duplication(g, {{"c", 4}});
  int replicas = 0;
  for (const auto& n : dup.nodes()) {
    if (!n.is_base()) continue;
    ++replicas;
    EXPECT_EQ(n.layer_name(), "c");
    EXPECT_EQ(n.output_shape(), (ir::TensorShape{4, 1, 5}));
    EXPECT_EQ(dup.node(n.inputs[0]).op, ir::OpKind::kSlice);
    EXPECT_EQ(dup.node(n.inputs[0]).output_shape(), (ir::TensorShape{6, 3, 2}));
  }
  EXPECT_EQ(replicas, 4);
  EXPECT_EQ(dup.node(dup.node("y").inputs[0]).output_shape(), (ir::TensorShape{4, 4, 5}));

  const auto input = testing::random_feature_map({4, 4, 2}, rng);
  const auto a = ir::evaluate(g, {{"x", input}}).at("y");
  const auto d = ir::evaluate(dup, {{"x", input}}).at("y");
  EXPECT_LE(testing::max_abs_diff(a, d), 1e-12);
}

TEST(ApplyDuplication, TooManyParts) {
  Builder b;
  b.input("x", 3, 3, 1);
  b.conv("c", "x", 2, 1, 1);
  const auto g = b.shaped();
  try {
    (void)mapping::apply_duplication(g, {{"c", 5}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidDuplication);
  }
}

TEST(DuplicationProblem, TinyYoloV4) {
  const auto p = mapping::duplication_problem(harness::load_benchmark("tinyyolov4"), ArchConfig{});
  ASSERT_EQ(p.layers.size(), 21u);
  EXPECT_EQ(p.layers[0], "conv2d");
  EXPECT_EQ(p.t[0], 43264);
  EXPECT_EQ(p.c[2], 3);
  EXPECT_EQ(std::accumulate(p.c.begin(), p.c.end(), std::int64_t{0}), 117);
}

}  // namespace
}  // namespace cimsched
