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

#ifndef PCGIL_HARNESS_REPORT_HPP_
#define PCGIL_HARNESS_REPORT_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace pcgil::harness {

struct ReportInput {
  std::string mode;
  std::string task;  // LevelSpec text with seed 0, after any t_max override
  std::vector<std::int64_t> env_steps;
  std::vector<double> returns;  // mean_return_100
};

// Reads config.resolved.json and metrics.csv from a run directory.
ReportInput load_run(const std::filesystem::path& run_dir);

struct ReportCell {
  double mean = 0.0;
  double std = 0.0;  // population std across runs
  std::size_t runs = 0;
};

// Rows keyed by env_steps; a mode has a cell at a step only when every one of
// its runs logged that step.
struct Report {
  std::vector<std::string> modes;  // first-seen order
  std::map<std::int64_t, std::map<std::string, ReportCell>> rows;
};

// Throws Error(kInvalidArgument) when runs disagree on the task.
Report aggregate(const std::vector<ReportInput>& runs);

// env_steps,<mode>_mean,<mode>_std,<mode>_n,...  (empty cells where a mode has no value)
void write_report_csv(const Report& report, std::ostream& out);

}  // namespace pcgil::harness

#endif  // PCGIL_HARNESS_REPORT_HPP_
