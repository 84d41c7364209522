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

#include "cimsched/mapping/duplication.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "cimsched/error.h"
#include "cimsched/ir/passes.h"

namespace cimsched::mapping {

namespace {

void check_instance(std::span<const std::int64_t> t, std::span<const std::int64_t> c,
                    std::int64_t F) {
  if (t.size() != c.size()) {
    throw Error(ErrorCode::kInvalidAttribute, "latency and PE vectors differ in length");
  }
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] < 1 || t[i] < 0) {
      throw Error(ErrorCode::kInvalidAttribute, "layer " + std::to_string(i) + " has c < 1 or t < 0");
    }
  }
  const std::int64_t need = std::accumulate(c.begin(), c.end(), std::int64_t{0});
  if (need > F) {
    throw Error(ErrorCode::kInfeasible, "weights need " + std::to_string(need) + " PEs, only " +
                                            std::to_string(F) + " available");
  }
}

// gain(i) = t_i / (d_i (d_i + 1) c_i); compared exactly by cross-multiplying.
bool better_gain(std::int64_t ti, std::int64_t di, std::int64_t ci, std::int64_t tj,
                 std::int64_t dj, std::int64_t cj) {
  __extension__ typedef __int128 wide;
  const wide lhs = static_cast<wide>(ti) * dj * (dj + 1) * cj;
  const wide rhs = static_cast<wide>(tj) * di * (di + 1) * ci;
  return lhs > rhs;
}

void greedy_fill(std::span<const std::int64_t> t, std::span<const std::int64_t> c,
                 std::vector<std::int64_t>& d, std::int64_t& spare) {
  while (true) {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (c[i] > spare || t[i] == 0) continue;
      if (!best || better_gain(t[i], d[i], c[i], t[*best], d[*best], c[*best])) best = i;
    }
    if (!best) return;
    d[*best] += 1;
    spare -= c[*best];
  }
}

long double objective_of(std::span<const std::int64_t> t, const std::vector<std::int64_t>& d) {
  long double sum = 0.0L;
  for (std::size_t i = 0; i < t.size(); ++i) sum += static_cast<long double>(t[i]) / static_cast<long double>(d[i]);
  return sum;
}

// Cheapest way to free at least `need` PEs by dropping copies from layers
// other than `keep`; writes the drops into `drop`. False if impossible.
bool cheapest_release(std::span<const std::int64_t> t, std::span<const std::int64_t> c,
                      const std::vector<std::int64_t>& d, std::size_t keep, std::int64_t need,
                      std::vector<std::int64_t>& drop, long double& loss) {
  constexpr long double kInf = std::numeric_limits<long double>::infinity();
  const auto cap = static_cast<std::size_t>(need);
  auto extra = [&](std::size_t j, std::int64_t b) {
    return static_cast<long double>(t[j]) / static_cast<long double>(d[j] - b) -
           static_cast<long double>(t[j]) / static_cast<long double>(d[j]);
  };
  auto reach = [&](std::size_t r, std::size_t j, std::int64_t b) {
    return std::min(cap, r + static_cast<std::size_t>(b * c[j]));
  };

  std::vector<std::size_t> layers;
  std::vector<std::vector<long double>> tables(1, std::vector<long double>(cap + 1, kInf));
  tables[0][0] = 0.0L;
  for (std::size_t j = 0; j < t.size(); ++j) {
    if (j == keep || d[j] < 2) continue;
    std::vector<long double> next = tables.back();
    const auto& cur = tables.back();
    for (std::int64_t b = 1; b < d[j]; ++b) {
      for (std::size_t r = 0; r <= cap; ++r) {
        if (cur[r] < kInf) next[reach(r, j, b)] = std::min(next[reach(r, j, b)], cur[r] + extra(j, b));
      }
    }
    layers.push_back(j);
    tables.push_back(std::move(next));
  }
  if (tables.back()[cap] == kInf) return false;
  loss = tables.back()[cap];
  drop.assign(t.size(), 0);

  std::size_t r = cap;
  for (std::size_t k = layers.size(); k-- > 0;) {
    const std::size_t j = layers[k];
    const auto& prev = tables[k];
    const long double target = tables[k + 1][r];
    if (prev[r] == target) continue;
    bool found = false;
    for (std::int64_t b = 1; b < d[j] && !found; ++b) {
      for (std::size_t from = 0; from <= cap && !found; ++from) {
        if (prev[from] < kInf && reach(from, j, b) == r && prev[from] + extra(j, b) == target) {
          drop[j] = b;
          r = from;
          found = true;
        }
      }
    }
  }
  return true;
}

// Marginal-gain fill, then local search until no move helps. Moves: give one
// layer more copies and release the PEs as cheaply as possible elsewhere, or
// drop copies of one layer and refill greedily.
std::vector<std::int64_t> solve_greedy(std::span<const std::int64_t> t,
                                       std::span<const std::int64_t> c, std::int64_t spare) {
  const std::size_t n = t.size();
  std::vector<std::int64_t> d(n, 1);
  greedy_fill(t, c, d, spare);
  long double current = objective_of(t, d);
  const long double eps = 1e-12L * std::max(current, 1.0L);
  std::int64_t releasable = 0;
  for (std::size_t j = 0; j < n; ++j) releasable += (d[j] - 1) * c[j];

  while (true) {
    std::vector<std::int64_t> best_d;
    std::int64_t best_spare = 0;
    long double best = current - eps;
    auto consider = [&](std::vector<std::int64_t> cand, std::int64_t cand_spare) {
      greedy_fill(t, c, cand, cand_spare);
      const long double v = objective_of(t, cand);
      if (v < best) {
        best = v;
        best_d = std::move(cand);
        best_spare = cand_spare;
      }
    };
    for (std::size_t i = 0; i < n; ++i) {
      for (std::int64_t a = 1; a * c[i] <= spare + releasable; ++a) {
        const std::int64_t need = a * c[i] - spare;
        if (need <= 0) continue;
        std::vector<std::int64_t> drop;
        long double loss = 0.0L;
        if (!cheapest_release(t, c, d, i, need, drop, loss)) break;
        std::vector<std::int64_t> cand = d;
        std::int64_t freed = 0;
        for (std::size_t j = 0; j < n; ++j) {
          cand[j] -= drop[j];
          freed += drop[j] * c[j];
        }
        cand[i] += a;
        consider(std::move(cand), spare + freed - a * c[i]);
      }
    }
    for (std::size_t j = 0; j < n; ++j) {
      for (std::int64_t b = 1; b < d[j]; ++b) {
        std::vector<std::int64_t> cand = d;
        cand[j] -= b;
        consider(std::move(cand), spare + b * c[j]);
      }
    }
    if (best_d.empty()) return d;
    d = std::move(best_d);
    spare = best_spare;
    current = best;
    releasable = 0;
    for (std::size_t j = 0; j < n; ++j) releasable += (d[j] - 1) * c[j];
  }
}

std::vector<std::int64_t> solve_exact(std::span<const std::int64_t> t,
                                      std::span<const std::int64_t> c, std::int64_t spare) {
  const std::size_t n = t.size();
  const auto budget = static_cast<std::size_t>(spare);
  double work = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    work += static_cast<double>(budget + 1) * static_cast<double>(budget / c[i] + 1);
  }
  if (work > 5e8) {
    throw Error(ErrorCode::kInfeasible, "instance too large for exact duplication solver");
  }
  // best[b]: minimum objective of the layers seen so far using at most b
  // spare PEs; extra[i][b]: duplicates beyond the first chosen for layer i.
  std::vector<double> best(budget + 1, 0.0);
  std::vector<std::vector<std::int64_t>> extra(n, std::vector<std::int64_t>(budget + 1, 0));
  for (std::size_t i = 0; i < n; ++i) {
    const auto ci = static_cast<std::size_t>(c[i]);
    std::vector<double> next(budget + 1, std::numeric_limits<double>::infinity());
    for (std::size_t b = 0; b <= budget; ++b) {
      for (std::size_t k = 0; k * ci <= b; ++k) {
        const double v = best[b - k * ci] + static_cast<double>(t[i]) / static_cast<double>(k + 1);
        // Relative slack keeps ties on the smaller duplicate count.
        if (v < next[b] - 1e-12 * std::max(1.0, std::abs(v))) {
          next[b] = v;
          extra[i][b] = static_cast<std::int64_t>(k);
        }
      }
    }
    best = std::move(next);
  }
  std::vector<std::int64_t> d(n, 1);
  std::size_t b = budget;
  for (std::size_t i = n; i-- > 0;) {
    const std::int64_t k = extra[i][b];
    d[i] = k + 1;
    b -= static_cast<std::size_t>(k * c[i]);
  }
  return d;
}

std::int64_t balanced_piece(std::int64_t total, std::int64_t pieces, std::int64_t index) {
  // First (total % pieces) pieces get one extra element.
  return total / pieces + (index < total % pieces ? 1 : 0);
}

}  // namespace

std::vector<std::int64_t> solve_duplication(std::span<const std::int64_t> t,
                                            std::span<const std::int64_t> c, std::int64_t F,
                                            SolverMode mode) {
  check_instance(t, c, F);
  const std::int64_t spare = F - std::accumulate(c.begin(), c.end(), std::int64_t{0});
  return mode == SolverMode::kGreedy ? solve_greedy(t, c, spare) : solve_exact(t, c, spare);
}

double duplication_objective(std::span<const std::int64_t> t, std::span<const std::int64_t> d) {
  double sum = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    sum += static_cast<double>(t[i]) / static_cast<double>(d[i]);
  }
  return sum;
}

DuplicationProblem duplication_problem(const ir::NNGraph& graph, const ArchConfig& arch) {
  DuplicationProblem p;
  for (const auto& name : graph.base_layers()) {
    const ir::LayerNode& n = graph.node(name);
    p.layers.push_back(name);
    p.t.push_back(intra_layer_latency(n.output_shape()));
    p.c.push_back(pe_count(n.conv().kernel, arch).pe_count);
  }
  return p;
}

PartGrid choose_part_grid(std::int64_t parts, const ir::TensorShape& ofm) {
  if (parts < 1 || parts > ofm.spatial()) {
    throw Error(ErrorCode::kInvalidDuplication, "cannot cut " + ir::to_string(ofm) + " into " +
                                                    std::to_string(parts) + " parts");
  }
  // Width first; extra grid rows only when the OFM is too narrow.
  std::optional<PartGrid> best;
  std::int64_t best_waste = 0;
  for (std::int64_t rows = 1; rows <= std::min(parts, ofm.height); ++rows) {
    const std::int64_t cols = (parts + rows - 1) / rows;
    if (cols > ofm.width) continue;
    if (parts - (rows - 1) * cols < 1) continue;  // last grid row would be empty
    const std::int64_t waste = rows * cols - parts;
    if (!best || waste < best_waste) {
      best = PartGrid{rows, cols};
      best_waste = waste;
    }
    if (waste == 0) break;
  }
  if (!best) {
    throw Error(ErrorCode::kInvalidDuplication,
                "no grid cuts " + ir::to_string(ofm) + " into " + std::to_string(parts) + " parts");
  }
  return *best;
}

std::vector<Region> split_output(std::int64_t parts, const ir::TensorShape& ofm) {
  const PartGrid grid = choose_part_grid(parts, ofm);
  std::vector<Region> out;
  std::int64_t row = 0;
  for (std::int64_t r = 0; r < grid.rows; ++r) {
    const std::int64_t height = balanced_piece(ofm.height, grid.rows, r);
    const std::int64_t in_row = (r + 1 < grid.rows) ? grid.cols : parts - (grid.rows - 1) * grid.cols;
    std::int64_t col = 0;
    for (std::int64_t k = 0; k < in_row; ++k) {
      const std::int64_t width = balanced_piece(ofm.width, in_row, k);
      out.push_back({row, row + height, col, col + width});
      col += width;
    }
    row += height;
  }
  return out;
}

ir::NNGraph apply_duplication(const ir::NNGraph& graph,
                              const std::map<std::string, std::int64_t>& duplicates) {
  ir::NNGraph g = graph;
  for (const auto& [name, d] : duplicates) {
    if (d < 1) throw Error(ErrorCode::kInvalidDuplication, "'" + name + "' has d < 1");
    if (d == 1) continue;
    const ir::LayerNode original = g.node(name);
    if (!original.is_base()) {
      throw Error(ErrorCode::kInvalidDuplication, "'" + name + "' is not a base layer");
    }
    const ir::TensorShape ofm = original.output_shape();
    if (d > ofm.spatial()) {
      throw Error(ErrorCode::kInvalidDuplication, "'" + name + "' has " + std::to_string(ofm.spatial()) +
                                                      " output vectors, cannot split " + std::to_string(d) + " ways");
    }
    const ir::KernelSpec& k = original.conv().kernel;
    if (original.op != ir::OpKind::kConv2D || k.padding.mode != ir::PaddingMode::kValid ||
        original.conv().bias) {
      throw Error(ErrorCode::kInvalidDuplication, "'" + name + "' is not a canonical conv2d");
    }
    const std::string& input = original.inputs.front();
    const ir::TensorShape ifm = g.node(input).output_shape();

    const PartGrid grid = choose_part_grid(d, ofm);
    const std::vector<Region> parts = split_output(d, ofm);
    std::vector<std::vector<std::string>> rows(static_cast<std::size_t>(grid.rows));
    std::int64_t grid_row = -1;
    std::int64_t last_row_begin = -1;

    for (std::size_t p = 0; p < parts.size(); ++p) {
      const Region& part = parts[p];
      const std::string suffix = std::to_string(p);

      ir::LayerNode slice;
      slice.name = name + "/slice" + suffix;
      slice.op = ir::OpKind::kSlice;
      slice.inputs = {input};
      const std::int64_t r0 = part.row_begin * k.stride_h;
      const std::int64_t c0 = part.col_begin * k.stride_w;
      const std::int64_t r1 = (part.row_end - 1) * k.stride_h + k.k_h;
      const std::int64_t c1 = (part.col_end - 1) * k.stride_w + k.k_w;
      slice.attrs = ir::SliceAttrs{{r0, c0, 0}, {r1 - r0, c1 - c0, ifm.channels}};

      ir::LayerNode replica = original;
      replica.name = name + "/dup" + suffix;
      replica.inputs = {slice.name};
      replica.origin = original.layer_name();
      replica.replica = static_cast<int>(p);
      replica.shape.reset();

      if (part.row_begin != last_row_begin) {
        ++grid_row;
        last_row_begin = part.row_begin;
      }
      rows[static_cast<std::size_t>(grid_row)].push_back(replica.name);
      g.add_node(std::move(slice));
      g.add_node(std::move(replica));
    }

    std::vector<std::string> row_outputs;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() == 1) {
        row_outputs.push_back(rows[r].front());
        continue;
      }
      ir::LayerNode concat;
      concat.name = rows.size() == 1 ? name + "/concat" : name + "/concat_row" + std::to_string(r);
      concat.op = ir::OpKind::kConcat;
      concat.inputs = rows[r];
      concat.attrs = ir::ConcatAttrs{ir::Axis::kW};
      row_outputs.push_back(concat.name);
      g.add_node(std::move(concat));
    }
    std::string merged = row_outputs.front();
    if (row_outputs.size() > 1) {
      ir::LayerNode concat;
      concat.name = name + "/concat";
      concat.op = ir::OpKind::kConcat;
      concat.inputs = row_outputs;
      concat.attrs = ir::ConcatAttrs{ir::Axis::kH};
      merged = concat.name;
      g.add_node(std::move(concat));
    }
    g.rewire_consumers(name, merged);
    g.remove_node(name);
  }
  return ir::infer_shapes(g);
}

}  // namespace cimsched::mapping
