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

#include "harness/metrics.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "common/error.hpp"

namespace pcgil::harness {

std::string format_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  require(ec == std::errc(), ErrorCode::kInternal, "cannot format number");
  return std::string(buf, end);
}

MetricsWriter::MetricsWriter(const std::filesystem::path& path) : out_(path) {
  require(static_cast<bool>(out_), ErrorCode::kIo, "cannot write " + path.string());
  out_ << kMetricsHeader << '\n';
}

void MetricsWriter::write(const MetricsRow& r) {
  out_ << r.env_steps << ',' << r.updates << ',' << format_double(r.mean_return_100) << ','
       << format_double(r.std_return_100) << ',' << format_double(r.policy_loss) << ','
       << format_double(r.value_loss) << ',' << format_double(r.entropy) << ','
       << format_double(r.clip_fraction) << ',';
  if (r.bc_loss) out_ << format_double(*r.bc_loss);
  out_ << '\n';
  out_.flush();
  require(static_cast<bool>(out_), ErrorCode::kIo, "metrics write failed");
}

namespace {

double parse_double(const std::string& field, const std::filesystem::path& path) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  require(ec == std::errc() && ptr == field.data() + field.size(), ErrorCode::kFormat,
          "bad number '" + field + "' in " + path.string());
  return v;
}

}  // namespace

std::vector<MetricsRow> read_metrics_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::kIo, "cannot open " + path.string());
  std::string line;
  require(static_cast<bool>(std::getline(in, line)) && line == kMetricsHeader, ErrorCode::kFormat,
          path.string() + " does not have the metrics header");
  std::vector<MetricsRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    require(f.size() == 9, ErrorCode::kFormat, "metrics row with wrong field count in " + path.string());
    MetricsRow r;
    r.env_steps = static_cast<std::int64_t>(parse_double(f[0], path));
    r.updates = static_cast<std::int64_t>(parse_double(f[1], path));
    r.mean_return_100 = parse_double(f[2], path);
    r.std_return_100 = parse_double(f[3], path);
    r.policy_loss = parse_double(f[4], path);
    r.value_loss = parse_double(f[5], path);
    r.entropy = parse_double(f[6], path);
    r.clip_fraction = parse_double(f[7], path);
    if (!f[8].empty()) r.bc_loss = parse_double(f[8], path);
    rows.push_back(r);
  }
  return rows;
}

void RollingReturns::push(double episode_return) {
  values_.push_back(episode_return);
  if (values_.size() > window_) values_.pop_front();
}

double RollingReturns::mean() const {
  if (values_.empty()) return 0.0;
  double s = 0.0;
  for (double v : values_) s += v;
  return s / static_cast<double>(values_.size());
}

double RollingReturns::std() const {
  if (values_.empty()) return 0.0;
  const double m = mean();
  double s = 0.0;
  for (double v : values_) s += (v - m) * (v - m);
  return std::sqrt(s / static_cast<double>(values_.size()));
}

}  // namespace pcgil::harness
