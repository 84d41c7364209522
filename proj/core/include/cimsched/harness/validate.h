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

#ifndef CIMSCHED_HARNESS_VALIDATE_H_
#define CIMSCHED_HARNESS_VALIDATE_H_

#include <filesystem>
#include <string>
#include <vector>

#include "cimsched/harness/pipeline.h"

namespace cimsched::harness {

struct ValidationEntry {
  std::string benchmark;
  std::string check;
  std::string expected;
  std::string actual;
  bool passed = false;
};

struct ValidationReport {
  std::vector<ValidationEntry> entries;
  [[nodiscard]] bool all_passed() const;
  [[nodiscard]] std::string to_table() const;
};

/// Checks the shipped models against the published reference figures:
/// input shape, base-layer count and PE_min per benchmark, plus the
/// TinyYOLOv4 per-layer shapes, PE counts and t_init. Load failures become
/// failed entries rather than exceptions.
ValidationReport validate_models(const std::filesystem::path& models_dir = default_models_dir());

}  // namespace cimsched::harness

#endif  // CIMSCHED_HARNESS_VALIDATE_H_
