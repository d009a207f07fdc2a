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

#include <algorithm>
#include <charconv>
#include <ostream>
#include <set>
#include <string>
#include <unordered_set>

#include "common/error.hpp"
#include "datasets/dataset.hpp"

namespace pcgil::data {

CheckpointPolicy::CheckpointPolicy(std::vector<double> thresholds, std::vector<std::string> tags)
    : thresholds_(std::move(thresholds)), tags_(std::move(tags)), fired_(thresholds_.size(), false) {
  require(!thresholds_.empty() && thresholds_.size() == tags_.size(), ErrorCode::kInvalidArgument,
          "checkpoint thresholds and tags must be non-empty and the same length");
  for (std::size_t i = 1; i < thresholds_.size(); ++i) {
    require(thresholds_[i] > thresholds_[i - 1], ErrorCode::kInvalidArgument,
            "checkpoint thresholds must be strictly increasing");
  }
}

CheckpointPolicy CheckpointPolicy::multi_room() {
  return CheckpointPolicy({0.06, 0.4, 0.6}, {"10", "60", "90"});
}

CheckpointPolicy CheckpointPolicy::obstructed() {
  return CheckpointPolicy({0.1, 0.6, 0.9}, {"10", "60", "90"});
}

CheckpointPolicy CheckpointPolicy::for_task(gridworld::TaskFamily family) {
  return family == gridworld::TaskFamily::kMultiRoom ? multi_room() : obstructed();
}

std::vector<std::size_t> CheckpointPolicy::crossings(double rolling_return) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < thresholds_.size(); ++i) {
    if (!fired_[i] && rolling_return >= thresholds_[i]) {
      fired_[i] = true;
      out.push_back(i);
    }
  }
  return out;
}

bool CheckpointPolicy::all_fired() const {
  return std::all_of(fired_.begin(), fired_.end(), [](bool f) { return f; });
}

std::vector<Dataset> capture_checkpoint(const rapid::RankedBuffer& buffer, double eval_return,
                                        CheckpointPolicy& policy,
                                        const gridworld::LevelSpec& task,
                                        const rapid::RapidWeights& weights) {
  std::vector<Dataset> out;
  if (buffer.empty()) return out;
  for (std::size_t i : policy.crossings(eval_return)) {
    out.push_back(snapshot(buffer, task, policy.tags()[i], weights));
  }
  return out;
}

Dataset select_subset(const Dataset& dataset, std::size_t n_levels,
                      const SubsetSelection& selection) {
  require(n_levels > 0, ErrorCode::kInvalidArgument, "subset needs at least one level");

  // Best-ranked trajectory per level, levels in order of first appearance.
  std::vector<std::size_t> best;
  std::unordered_set<std::uint64_t> seen;
  for (std::size_t i = 0; i < dataset.trajectories.size(); ++i) {
    if (seen.insert(dataset.trajectories[i].record.level.seed).second) best.push_back(i);
  }
  auto seed_of = [&](std::size_t i) { return dataset.trajectories[i].record.level.seed; };

  std::vector<std::size_t> chosen;
  switch (selection.mode) {
    case SubsetMode::kFirstN:
      chosen = best;
      break;
    case SubsetMode::kCommonWith: {
      require(selection.other != nullptr, ErrorCode::kInvalidArgument,
              "common_with selection needs a second dataset");
      std::unordered_set<std::uint64_t> other;
      for (const auto& t : selection.other->trajectories) other.insert(t.record.level.seed);
      for (std::size_t i : best) {
        if (other.contains(seed_of(i))) chosen.push_back(i);
      }
      require(!chosen.empty(), ErrorCode::kInsufficientData, "datasets share no levels");
      break;
    }
    case SubsetMode::kExplicit: {
      require(selection.level_seeds.size() == n_levels, ErrorCode::kInvalidArgument,
              "explicit selection must list exactly n_levels seeds");
      for (std::uint64_t s : selection.level_seeds) {
        const auto it = std::find_if(best.begin(), best.end(), [&](std::size_t i) { return seed_of(i) == s; });
        require(it != best.end(), ErrorCode::kInsufficientData,
                "level seed " + std::to_string(s) + " is not in the dataset");
        chosen.push_back(*it);
      }
      break;
    }
  }
  require(chosen.size() >= n_levels, ErrorCode::kInsufficientData,
          "requested " + std::to_string(n_levels) + " levels but only " +
              std::to_string(chosen.size()) + " are available");
  chosen.resize(n_levels);
  std::sort(chosen.begin(), chosen.end());

  Dataset out;
  out.task = dataset.task;
  out.tag = dataset.tag;
  out.weights = dataset.weights;
  for (std::size_t i : chosen) out.trajectories.push_back(dataset.trajectories[i]);
  return out;
}

Histogram step_distribution(const Dataset& dataset, int bins) {
  require(bins > 0, ErrorCode::kInvalidArgument, "histogram needs at least one bin");
  require(!dataset.trajectories.empty(), ErrorCode::kInsufficientData,
          "histogram of an empty dataset");
  const long t_max = dataset.task.t_max;
  Histogram h;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  for (int b = 0; b < bins; ++b) {
    h.lower.push_back(static_cast<double>(t_max) * b / bins);
    h.upper.push_back(static_cast<double>(t_max) * (b + 1) / bins);
  }
  for (const auto& t : dataset.trajectories) {
    const long len = t.record.length();
    // bin b holds lengths in (b * t_max / bins, (b + 1) * t_max / bins]
    long b = (len * bins - 1) / t_max;
    b = std::clamp<long>(b, 0, bins - 1);
    ++h.counts[static_cast<std::size_t>(b)];
  }
  const double n = static_cast<double>(dataset.trajectories.size());
  for (std::size_t c : h.counts) h.mass.push_back(static_cast<double>(c) / n);
  return h;
}

namespace {

std::string shortest(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

}  // namespace

void write_histogram_csv(const Histogram& histogram, std::ostream& out) {
  out << "bin_lower,bin_upper,count,probability\n";
  for (std::size_t b = 0; b < histogram.counts.size(); ++b) {
    out << shortest(histogram.lower[b]) << ',' << shortest(histogram.upper[b]) << ','
        << histogram.counts[b] << ',' << shortest(histogram.mass[b]) << '\n';
  }
}

}  // namespace pcgil::data
