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

#ifndef CIMSCHED_IR_MODEL_IO_H_
#define CIMSCHED_IR_MODEL_IO_H_

#include <filesystem>
#include <string>
#include <string_view>

#include "cimsched/ir/graph.h"

namespace cimsched::ir {

/// Parses a JSON model description into an unshaped graph.
///
/// Layout: {"name": ..., "layers": [{"name", "op", "inputs", "attrs"}]}.
/// Relative `weights` paths inside attrs are resolved against `base_dir`.
/// Throws Error with kSyntax (carrying line and column), kDuplicateName,
/// kUnknownOp, kUnknownAttribute, kInvalidAttribute or kDanglingInput.
NNGraph parse_model(std::string_view file_contents,
                    const std::filesystem::path& base_dir = {});

NNGraph load_model(const std::filesystem::path& path);

}  // namespace cimsched::ir

#endif  // CIMSCHED_IR_MODEL_IO_H_
