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

#ifndef CIMSCHED_MAPPING_DUPLICATION_H_
#define CIMSCHED_MAPPING_DUPLICATION_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "cimsched/ir/graph.h"
#include "cimsched/ir/region.h"
#include "cimsched/mapping/mapping.h"

namespace cimsched::mapping {

enum class SolverMode {
  kGreedy,  // marginal gain per PE (ties to the lowest index), then local search over copy moves
  kExact,   // dynamic program over the spare-PE budget
};

/// Picks duplicate counts d minimizing sum(t_i / d_i) subject to
/// sum(c_i * d_i) <= F and d_i >= 1. Throws kInfeasible if sum(c) > F.
std::vector<std::int64_t> solve_duplication(std::span<const std::int64_t> t,
                                            std::span<const std::int64_t> c, std::int64_t F,
                                            SolverMode mode = SolverMode::kGreedy);

double duplication_objective(std::span<const std::int64_t> t, std::span<const std::int64_t> d);

/// Per-base-layer latency and PE demand of a canonical graph, in
/// base_layers() order.
struct DuplicationProblem {
  std::vector<std::string> layers;
  std::vector<std::int64_t> t;
  std::vector<std::int64_t> c;
};

DuplicationProblem duplication_problem(const ir::NNGraph& graph, const ArchConfig& arch);

/// Grid used to cut an OFM into `parts` pieces.
struct PartGrid {
  std::int64_t rows = 1;
  std::int64_t cols = 1;
};

/// Fewest grid rows whose rows*cols >= parts fits the OFM with the least
/// slack; for parts <= O_W this is a single row of column strips.
PartGrid choose_part_grid(std::int64_t parts, const ir::TensorShape& ofm);

/// Disjoint OFM pieces for `parts` replicas, row-major. Cells of the grid
/// beyond `parts` are absorbed by widening the last grid row's pieces.
std::vector<Region> split_output(std::int64_t parts, const ir::TensorShape& ofm);

/// Replaces each base layer with d > 1 by d replicas, each fed by a slice of
/// the input and recombined with concat nodes (one concat level per cut
/// dimension). Consumers are rewired to the recombined output.
/// Throws kInvalidDuplication when d exceeds O_H * O_W.
ir::NNGraph apply_duplication(const ir::NNGraph& graph,
                              const std::map<std::string, std::int64_t>& duplicates);

}  // namespace cimsched::mapping

#endif  // CIMSCHED_MAPPING_DUPLICATION_H_
