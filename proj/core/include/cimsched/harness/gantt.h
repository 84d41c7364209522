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

#ifndef CIMSCHED_HARNESS_GANTT_H_
#define CIMSCHED_HARNESS_GANTT_H_

#include <string>

#include "cimsched/mapping/mapping.h"
#include "cimsched/sched/schedule.h"

namespace cimsched::harness {

// One lane per layer replica, one bar per set over a cycle axis.
std::string emit_gantt(const sched::Schedule& schedule, const mapping::MappingPlan& plan);

}  // namespace cimsched::harness

#endif  // CIMSCHED_HARNESS_GANTT_H_
