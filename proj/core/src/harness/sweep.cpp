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

#include "cimsched/harness/sweep.h"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include <nlohmann/json.hpp>

#include "cimsched/error.h"
#include "cimsched/harness/gantt.h"

namespace cimsched::harness {

namespace {

struct Cell {
  std::size_t benchmark = 0;
  std::int64_t extra_pes = 0;
  Mode mode = Mode::kLayerByLayer;
};

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  out << text;
}

std::string format_double(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
  return buf;
}

// Repeatable full-precision text for CSV.
std::string exact(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepConfig& config) {
  if (config.modes.empty()) throw Error(ErrorCode::kInvalidAttribute, "sweep needs at least one mode");
  for (auto x : config.extra_pes) {
    if (x < 0) throw Error(ErrorCode::kInvalidAttribute, "extra PEs must be non-negative");
  }

  std::vector<ir::NNGraph> graphs;
  for (const auto& name : config.benchmarks) graphs.push_back(load_benchmark(name, config.models_dir));

  std::vector<Cell> cells;
  for (std::size_t b = 0; b < graphs.size(); ++b) {
    std::vector<std::int64_t> xs = config.extra_pes;
    if (config.include_reference_rows) xs.push_back(0);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    for (auto x : xs) {
      for (Mode m : config.modes) {
        const bool listed = std::find(config.extra_pes.begin(), config.extra_pes.end(), x) !=
                            config.extra_pes.end();
        if (!listed && uses_duplication(m)) continue;
        cells.push_back({b, x, m});
      }
    }
  }
  std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
    return std::tuple{a.benchmark, a.extra_pes, static_cast<int>(a.mode)} <
           std::tuple{b.benchmark, b.extra_pes, static_cast<int>(b.mode)};
  });

  if (config.output_dir) std::filesystem::create_directories(*config.output_dir);

  std::vector<SweepRow> rows(cells.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr failure;
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      try {
        const Cell& cell = cells[i];
        RunConfig rc;
        rc.mode = cell.mode;
        rc.extra_pes = cell.extra_pes;
        rc.sets_per_layer = config.sets_per_layer;
        rc.pe_rows = config.pe_rows;
        rc.pe_cols = config.pe_cols;
        rc.t_mvm_ns = config.t_mvm_ns;
        rc.solver = config.solver;
        const RunResult r = run_configuration(graphs[cell.benchmark], rc);

        SweepRow& row = rows[i];
        row.benchmark = config.benchmarks[cell.benchmark];
        row.extra_pes = cell.extra_pes;
        row.mode = cell.mode;
        row.pe_min = r.pe_min;
        row.num_pe = r.arch.num_pe;
        row.cycles = r.report.total_cycles;
        row.latency_ns = r.report.total_latency_ns;
        row.utilization = r.report.utilization;
        row.speedup = r.report.speedup;
        row.baseline_cycles = r.baseline.cycles;
        row.baseline_utilization = r.baseline.utilization;
        row.speedup_relation_deviation = r.speedup_relation_deviation;

        if (config.output_dir) {
          std::string mode_dir(to_string(cell.mode));
          std::replace(mode_dir.begin(), mode_dir.end(), '+', '_');
          const auto dir = *config.output_dir / row.benchmark /
                           (mode_dir + "_x" + std::to_string(cell.extra_pes));
          std::filesystem::create_directories(dir);
          write_file(dir / "schedule.json", r.schedule.to_json());
          write_file(dir / "gantt.svg", emit_gantt(r.schedule, r.plan));
        }
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  unsigned threads = config.threads != 0 ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(cells.size(), 1)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  if (config.output_dir) {
    write_file(*config.output_dir / "results.csv", rows_to_csv(rows));
    write_file(*config.output_dir / "results.json", rows_to_json(rows));
  }
  return rows;
}

std::string rows_to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "benchmark,x,mapping_mode,scheduling_mode,pe_min,num_pe,cycles,latency_ns,utilization,"
        "speedup,baseline_cycles,baseline_utilization,speedup_relation_deviation\n";
  for (const auto& r : rows) {
    os << r.benchmark << ',' << r.extra_pes << ',' << (uses_duplication(r.mode) ? "wdup" : "none")
       << ',' << (uses_cross_layer(r.mode) ? "xinf" : "lbl") << ',' << r.pe_min << ',' << r.num_pe
       << ',' << r.cycles << ',' << exact(r.latency_ns) << ',' << exact(r.utilization) << ','
       << exact(r.speedup) << ',' << r.baseline_cycles << ',' << exact(r.baseline_utilization) << ','
       << exact(r.speedup_relation_deviation) << '\n';
  }
  return os.str();
}

std::string rows_to_json(const std::vector<SweepRow>& rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json e;
    e["benchmark"] = r.benchmark;
    e["x"] = r.extra_pes;
    e["mode"] = to_string(r.mode);
    e["mapping_mode"] = uses_duplication(r.mode) ? "wdup" : "none";
    e["scheduling_mode"] = uses_cross_layer(r.mode) ? "xinf" : "lbl";
    e["pe_min"] = r.pe_min;
    e["num_pe"] = r.num_pe;
    e["cycles"] = r.cycles;
    e["latency_ns"] = r.latency_ns;
    e["utilization"] = r.utilization;
    e["speedup"] = r.speedup;
    e["baseline_cycles"] = r.baseline_cycles;
    e["baseline_utilization"] = r.baseline_utilization;
    e["speedup_relation_deviation"] = r.speedup_relation_deviation;
    arr.push_back(std::move(e));
  }
  return arr.dump(2);
}

std::string rows_to_table(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof(line), "%-12s %4s %-10s %6s %12s %8s %8s\n", "benchmark", "x", "mode",
                "#PE", "cycles", "Ut", "speedup");
  os << line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof(line), "%-12s %4lld %-10s %6lld %12lld %8s %8s\n", r.benchmark.c_str(),
                  static_cast<long long>(r.extra_pes), std::string(to_string(r.mode)).c_str(),
                  static_cast<long long>(r.num_pe), static_cast<long long>(r.cycles),
                  format_double(r.utilization, 3).c_str(), format_double(r.speedup, 1).c_str());
    os << line;
  }
  return os.str();
}

}  // namespace cimsched::harness
