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

#ifndef CIMSCHED_IR_TENSOR_SHAPE_H_
#define CIMSCHED_IR_TENSOR_SHAPE_H_

#include <cstdint>
#include <ostream>
#include <string>

namespace cimsched::ir {

// Feature-map shape in HWC layout. Dense outputs are (1, 1, units).
struct TensorShape {
  std::int64_t height = 1;
  std::int64_t width = 1;
  std::int64_t channels = 1;

  [[nodiscard]] std::int64_t spatial() const { return height * width; }
  [[nodiscard]] std::int64_t elements() const { return height * width * channels; }
  [[nodiscard]] bool valid() const { return height >= 1 && width >= 1 && channels >= 1; }

  friend bool operator==(const TensorShape&, const TensorShape&) = default;
};

std::string to_string(const TensorShape& shape);
std::ostream& operator<<(std::ostream& os, const TensorShape& shape);

}  // namespace cimsched::ir

#endif  // CIMSCHED_IR_TENSOR_SHAPE_H_
