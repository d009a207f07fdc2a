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

#ifndef PCGIL_DATASETS_DATASET_HPP_
#define PCGIL_DATASETS_DATASET_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "datasets/trajectory.hpp"
#include "gridworld/level_spec.hpp"
#include "rapid/rapid_buffer.hpp"

namespace pcgil::data {

struct BufferStats {
  std::size_t n_levels = 0;
  double mean_traj_per_level = 0.0;
  double mean_exp_per_traj = 0.0;
  double mean_return = 0.0;
  std::size_t n_trajectories = 0;
  std::size_t n_tuples = 0;

  friend bool operator==(const BufferStats&, const BufferStats&) = default;
};

// Immutable snapshot of a ranked buffer. Trajectories keep buffer order
// (descending score, older first on ties).
struct Dataset {
  gridworld::LevelSpec task;  // seed field unused
  std::string tag;
  rapid::RapidWeights weights;
  std::vector<rapid::ScoredTrajectory> trajectories;

  std::size_t tuple_count() const;
};

Dataset snapshot(const rapid::RankedBuffer& buffer, const gridworld::LevelSpec& task,
                 std::string tag, const rapid::RapidWeights& weights);

// Loads a dataset into a buffer, preserving its order. Capacity defaults to
// max(10,000, dataset tuples) so nothing is evicted.
rapid::RankedBuffer to_buffer(const Dataset& dataset, std::size_t capacity = 0);

// Throws Error(kInsufficientData) on an empty dataset.
BufferStats compute_stats(const Dataset& dataset);

// Binary container plus a text index written next to it as <path>.idx.
//
//   "PCGILDS\0" u32 version(=1)
//   level record (task)  string tag  f64 w0 w1 w2
//   stats: u64 n_levels f64 mean_traj_per_level f64 mean_exp_per_traj
//          f64 mean_return u64 n_trajectories u64 n_tuples
//   u64 n_trajectories, then per trajectory:
//     level record  f64 s_ext s_local s_global score  u64 age
//     u8 terminated  f64 return  u32 length  u32 view_size
//     per step: view_size^2*3 u8 view, u8 direction, u8 action, f64 reward
void save_dataset(const Dataset& dataset, const std::filesystem::path& path);

// Verifies record invariants and that the stored stats match a recount.
Dataset load_dataset(const std::filesystem::path& path);

void write_index(const Dataset& dataset, std::ostream& out);

// Thresholds on the rolling training return at which the demonstrator's
// buffer is captured. Each threshold fires at most once.
class CheckpointPolicy {
 public:
  CheckpointPolicy(std::vector<double> thresholds, std::vector<std::string> tags);

  static CheckpointPolicy multi_room();     // 0.06, 0.4, 0.6
  static CheckpointPolicy obstructed();     // 0.1, 0.6, 0.9
  static CheckpointPolicy for_task(gridworld::TaskFamily family);

  // Marks and returns the indices of every unfired threshold that
  // rolling_return has reached.
  std::vector<std::size_t> crossings(double rolling_return);

  const std::vector<double>& thresholds() const { return thresholds_; }
  const std::vector<std::string>& tags() const { return tags_; }
  const std::vector<bool>& fired() const { return fired_; }
  bool all_fired() const;

 private:
  std::vector<double> thresholds_;
  std::vector<std::string> tags_;
  std::vector<bool> fired_;
};

// One snapshot per threshold newly crossed by eval_return. Never modifies
// the buffer.
std::vector<Dataset> capture_checkpoint(const rapid::RankedBuffer& buffer, double eval_return,
                                        CheckpointPolicy& policy,
                                        const gridworld::LevelSpec& task,
                                        const rapid::RapidWeights& weights);

enum class SubsetMode { kFirstN, kCommonWith, kExplicit };

struct SubsetSelection {
  SubsetMode mode = SubsetMode::kFirstN;
  const Dataset* other = nullptr;           // kCommonWith
  std::vector<std::uint64_t> level_seeds;   // kExplicit
};

// Keeps one trajectory (the best ranked) for each of n_levels levels, taken
// in ranked order of first appearance.
Dataset select_subset(const Dataset& dataset, std::size_t n_levels,
                      const SubsetSelection& selection = {});

struct Histogram {
  std::vector<double> lower;  // exclusive
  std::vector<double> upper;  // inclusive
  std::vector<std::size_t> counts;
  std::vector<double> mass;
};

// Normalized histogram of trajectory lengths over (0, t_max] in equal bins.
Histogram step_distribution(const Dataset& dataset, int bins);
void write_histogram_csv(const Histogram& histogram, std::ostream& out);

}  // namespace pcgil::data

#endif  // PCGIL_DATASETS_DATASET_HPP_
