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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cimsched/error.h"
#include "cimsched/harness/gantt.h"
#include "cimsched/harness/pipeline.h"
#include "cimsched/harness/sweep.h"
#include "cimsched/harness/validate.h"

namespace {

using namespace cimsched;

struct Options {
  std::int64_t pe_rows = 256;
  std::int64_t pe_cols = 256;
  double t_mvm_ns = 1400.0;
  std::vector<std::int64_t> extra_pes;
  std::int64_t sets_per_layer = sched::kDefaultSetsPerLayer;
  std::vector<std::string> modes;
  std::string out;
  std::string models_dir;
  std::string solver = "greedy";
  std::vector<std::string> benchmarks;
  unsigned threads = 0;
};

std::filesystem::path models_dir(const Options& o) {
  return o.models_dir.empty() ? harness::default_models_dir() : std::filesystem::path(o.models_dir);
}

mapping::SolverMode solver_of(const Options& o) {
  return o.solver == "exact" ? mapping::SolverMode::kExact : mapping::SolverMode::kGreedy;
}

harness::Mode single_mode(const Options& o, harness::Mode fallback) {
  if (o.modes.empty()) return fallback;
  if (o.modes.size() > 1) throw Error(ErrorCode::kInvalidAttribute, "this command takes a single --mode");
  return *harness::parse_mode(o.modes.front());
}

harness::RunResult run_one(const Options& o, harness::Mode fallback) {
  if (o.benchmarks.size() != 1) throw Error(ErrorCode::kInvalidAttribute, "expected exactly one model");
  if (o.extra_pes.size() > 1) throw Error(ErrorCode::kInvalidAttribute, "this command takes a single --extra-pes");
  harness::RunConfig rc;
  rc.mode = single_mode(o, fallback);
  rc.extra_pes = o.extra_pes.empty() ? 0 : o.extra_pes.front();
  rc.sets_per_layer = o.sets_per_layer;
  rc.pe_rows = o.pe_rows;
  rc.pe_cols = o.pe_cols;
  rc.t_mvm_ns = o.t_mvm_ns;
  rc.solver = solver_of(o);
  return harness::run_configuration(harness::load_benchmark(o.benchmarks.front(), models_dir(o)), rc);
}

void emit(const Options& o, const std::string& file, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::filesystem::path path = o.out;
  if (std::filesystem::is_directory(path)) path /= file;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream(path, std::ios::binary) << text;
  std::cerr << "wrote " << path.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cross-layer scheduling and weight duplication for CIM accelerators"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;

  app.add_option("--pe-rows", o.pe_rows, "Crossbar rows per PE (M)")->check(CLI::PositiveNumber);
  app.add_option("--pe-cols", o.pe_cols, "Crossbar columns per PE (N)")->check(CLI::PositiveNumber);
  app.add_option("--t-mvm-ns", o.t_mvm_ns, "Latency of one MVM in ns")->check(CLI::PositiveNumber);
  app.add_option("--extra-pes", o.extra_pes, "PEs beyond PE_min (x); repeatable for sweep")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--sets-per-layer", o.sets_per_layer, "Target number of sets per layer (0: finest)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--mode", o.modes, "lbl, wdup, xinf or wdup+xinf; repeatable for sweep")
      ->check(CLI::IsMember({"lbl", "wdup", "xinf", "wdup+xinf"}));
  app.add_option("--out", o.out, "Output file or directory");
  app.add_option("--models-dir", o.models_dir, "Directory holding <benchmark>.json model files");
  app.add_option("--solver", o.solver, "Duplication solver")->check(CLI::IsMember({"greedy", "exact"}));

  auto* validate = app.add_subcommand("validate", "Check shipped models against reference figures");
  auto* map = app.add_subcommand("map", "Print the PE mapping of a model");
  auto* schedule = app.add_subcommand("schedule", "Print the set schedule of a model");
  auto* simulate = app.add_subcommand("simulate", "Simulate one configuration");
  auto* sweep = app.add_subcommand("sweep", "Run the configuration sweep");
  auto* gantt = app.add_subcommand("gantt", "Render a schedule as an SVG Gantt chart");
  for (auto* sub : {map, schedule, simulate, gantt}) {
    sub->add_option("model", o.benchmarks, "Benchmark name or model file")->required()->expected(1);
  }
  sweep->add_option("benchmarks", o.benchmarks, "Benchmarks (default: all seven)");
  sweep->add_option("--threads", o.threads, "Worker threads (0: all cores)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) {
      const auto report = harness::validate_models(models_dir(o));
      emit(o, "validation.txt", report.to_table());
      return report.all_passed() ? 0 : 1;
    }
    if (map->parsed()) {
      emit(o, "mapping.json", run_one(o, harness::Mode::kLayerByLayer).plan.to_json());
    } else if (schedule->parsed()) {
      emit(o, "schedule.json", run_one(o, harness::Mode::kXinf).schedule.to_json());
    } else if (simulate->parsed()) {
      emit(o, "report.json", run_one(o, harness::Mode::kXinf).report.to_json());
    } else if (gantt->parsed()) {
      const auto r = run_one(o, harness::Mode::kXinf);
      emit(o, "gantt.svg", harness::emit_gantt(r.schedule, r.plan));
    } else if (sweep->parsed()) {
      harness::SweepConfig sc;
      if (!o.benchmarks.empty()) sc.benchmarks = o.benchmarks;
      if (!o.extra_pes.empty()) sc.extra_pes = o.extra_pes;
      if (!o.modes.empty()) {
        sc.modes.clear();
        for (const auto& m : o.modes) sc.modes.push_back(*harness::parse_mode(m));
      }
      sc.pe_rows = o.pe_rows;
      sc.pe_cols = o.pe_cols;
      sc.t_mvm_ns = o.t_mvm_ns;
      sc.sets_per_layer = o.sets_per_layer;
      sc.solver = solver_of(o);
      sc.models_dir = models_dir(o);
      sc.threads = o.threads;
      if (!o.out.empty()) sc.output_dir = std::filesystem::path(o.out);
      const auto rows = harness::run_sweep(sc);
      std::cout << harness::rows_to_table(rows);
    }
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
