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

#ifndef CIMSCHED_IR_REGION_H_
#define CIMSCHED_IR_REGION_H_

#include <algorithm>
#include <cstdint>
#include <optional>
#include <ostream>

namespace cimsched {

/// Half-open spatial rectangle [row_begin, row_end) x [col_begin, col_end).
///
/// Regions identify output-feature-map fragments by their two corner
/// coordinates. Channels are never cut, so a region always spans the full
/// channel depth of the tensor it refers to.
struct Region {
  std::int64_t row_begin = 0;
  std::int64_t row_end = 0;
  std::int64_t col_begin = 0;
  std::int64_t col_end = 0;

  [[nodiscard]] std::int64_t rows() const { return row_end - row_begin; }
  [[nodiscard]] std::int64_t cols() const { return col_end - col_begin; }
  [[nodiscard]] std::int64_t area() const { return empty() ? 0 : rows() * cols(); }
  [[nodiscard]] bool empty() const { return row_end <= row_begin || col_end <= col_begin; }

  [[nodiscard]] bool contains(std::int64_t row, std::int64_t col) const {
    return row >= row_begin && row < row_end && col >= col_begin && col < col_end;
  }

  friend bool operator==(const Region&, const Region&) = default;
};

inline Region whole_region(std::int64_t rows, std::int64_t cols) { return {0, rows, 0, cols}; }

/// Intersection; std::nullopt when the rectangles do not overlap.
inline std::optional<Region> intersect(const Region& a, const Region& b) {
  Region r{std::max(a.row_begin, b.row_begin), std::min(a.row_end, b.row_end),
           std::max(a.col_begin, b.col_begin), std::min(a.col_end, b.col_end)};
  if (r.empty()) return std::nullopt;
  return r;
}

inline std::ostream& operator<<(std::ostream& os, const Region& r) {
  return os << "[" << r.row_begin << "," << r.row_end << ")x[" << r.col_begin << "," << r.col_end
            << ")";
}

}  // namespace cimsched

#endif  // CIMSCHED_IR_REGION_H_
