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

#ifndef PCGIL_HARNESS_METRICS_HPP_
#define PCGIL_HARNESS_METRICS_HPP_

#include <cstdint>
#include <deque>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace pcgil::harness {

inline constexpr const char* kMetricsHeader =
    "env_steps,updates,mean_return_100,std_return_100,policy_loss,value_loss,entropy,"
    "clip_fraction,bc_loss";
inline constexpr const char* kPretrainHeader = "update_index,bc_loss,eval_return";

struct MetricsRow {
  std::int64_t env_steps = 0;
  std::int64_t updates = 0;
  double mean_return_100 = 0.0;
  double std_return_100 = 0.0;
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double clip_fraction = 0.0;
  std::optional<double> bc_loss;
};

// Shortest decimal text that round-trips the double.
std::string format_double(double value);

class MetricsWriter {
 public:
  explicit MetricsWriter(const std::filesystem::path& path);
  void write(const MetricsRow& row);

 private:
  std::ofstream out_;
};

std::vector<MetricsRow> read_metrics_csv(const std::filesystem::path& path);

// Mean and population std of the last `window` episode returns.
class RollingReturns {
 public:
  explicit RollingReturns(std::size_t window) : window_(window) {}

  void push(double episode_return);
  bool full() const { return values_.size() == window_; }
  std::size_t size() const { return values_.size(); }
  double mean() const;
  double std() const;

 private:
  std::size_t window_;
  std::deque<double> values_;
};

}  // namespace pcgil::harness

#endif  // PCGIL_HARNESS_METRICS_HPP_
