// Copyright 2026 The pcgil Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "harness/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "common/error.hpp"
#include "harness/config.hpp"
#include "harness/metrics.hpp"

namespace pcgil::harness {

namespace fs = std::filesystem;

ReportInput load_run(const fs::path& run_dir) {
  const ExperimentConfig cfg = load_config((run_dir / "config.resolved.json").string());
  ReportInput in;
  in.mode = mode_name(cfg.mode);
  in.task = cfg.effective_task().to_text();
  for (const MetricsRow& r : read_metrics_csv(run_dir / "metrics.csv")) {
    in.env_steps.push_back(r.env_steps);
    in.returns.push_back(r.mean_return_100);
  }
  return in;
}

Report aggregate(const std::vector<ReportInput>& runs) {
  require(!runs.empty(), ErrorCode::kInvalidArgument, "report needs at least one run");
  for (const auto& r : runs) {
    require(r.task == runs.front().task, ErrorCode::kInvalidArgument,
            "mismatched task configs across runs: '" + runs.front().task + "' vs '" + r.task + "'");
    require(r.env_steps.size() == r.returns.size(), ErrorCode::kInvalidArgument,
            "run has mismatched column lengths");
  }
  Report report;
  std::map<std::string, std::vector<const ReportInput*>> by_mode;
  for (const auto& r : runs) {
    if (!by_mode.contains(r.mode)) report.modes.push_back(r.mode);
    by_mode[r.mode].push_back(&r);
  }
  for (const auto& [mode, group] : by_mode) {
    std::map<std::int64_t, std::vector<double>> values;
    for (const ReportInput* run : group) {
      for (std::size_t i = 0; i < run->env_steps.size(); ++i) {
        values[run->env_steps[i]].push_back(run->returns[i]);
      }
    }
    for (const auto& [step, v] : values) {
      if (v.size() != group.size()) continue;
      // Offsets from the first run keep identical runs at exactly zero spread.
      const double n = static_cast<double>(v.size());
      double shift = 0.0;
      for (double x : v) shift += x - v.front();
      shift /= n;
      double s = 0.0;
      for (double x : v) s += (x - v.front() - shift) * (x - v.front() - shift);
      ReportCell cell;
      cell.mean = v.front() + shift;
      cell.std = std::sqrt(s / n);
      cell.runs = v.size();
      report.rows[step][mode] = cell;
    }
  }
  return report;
}

void write_report_csv(const Report& report, std::ostream& out) {
  out << "env_steps";
  for (const auto& m : report.modes) out << ',' << m << "_mean," << m << "_std," << m << "_n";
  out << '\n';
  for (const auto& [step, cells] : report.rows) {
    out << step;
    for (const auto& m : report.modes) {
      auto it = cells.find(m);
      if (it == cells.end()) {
        out << ",,,";
      } else {
        out << ',' << format_double(it->second.mean) << ',' << format_double(it->second.std) << ','
            << it->second.runs;
      }
    }
    out << '\n';
  }
}

}  // namespace pcgil::harness
