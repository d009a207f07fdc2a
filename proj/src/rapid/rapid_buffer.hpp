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
#ifndef PCGIL_RAPID_RAPID_BUFFER_HPP_
#define PCGIL_RAPID_RAPID_BUFFER_HPP_

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "common/rng.hpp"
#include "datasets/trajectory.hpp"

namespace pcgil::rapid {

inline constexpr std::size_t kDefaultCapacityTuples = 10'000;

struct RapidWeights {
  double w0 = 1.0;    // episode return
  double w1 = 0.1;    // within-episode diversity
  double w2 = 0.001;  // global novelty
  void validate() const;
};

// Visit counts keyed by Observation::hash().
class VisitCounter {
 public:
  void update(const data::TrajectoryRecord& trajectory);
  void add(std::uint64_t observation_hash, std::uint64_t times = 1);
  std::uint64_t count(std::uint64_t observation_hash) const;
  std::size_t distinct() const { return counts_.size(); }

 private:
  std::unordered_map<std::uint64_t, std::uint64_t> counts_;
};

struct ScoredTrajectory {
  data::TrajectoryRecord record;
  double s_ext = 0.0;
  double s_local = 0.0;
  double s_global = 0.0;
  double score = 0.0;
  // Insertion order inside a RankedBuffer; lower is older.
  std::uint64_t age = 0;

  friend bool operator==(const ScoredTrajectory&, const ScoredTrajectory&) = default;
};

// score = w0 * return + w1 * distinct/length + w2 * mean 1/sqrt(max(1, N(o))),
// with N read from counter as-is (callers update counts first).
ScoredTrajectory score_trajectory(const data::TrajectoryRecord& record,
                                  const VisitCounter& counter, const RapidWeights& weights);

// True when a ranks strictly ahead of b: higher score, then older.
inline bool ranks_before(double score_a, std::uint64_t age_a, double score_b,
                         std::uint64_t age_b) {
  return score_a > score_b || (score_a == score_b && age_a < age_b);
}

// Trajectories sorted by score (ties: older first), bounded by the total
// number of experience tuples. Whole trajectories are evicted from the bottom.
// Once anything has been evicted or rejected, the highest-ranked such
// trajectory becomes a cutoff and later arrivals ranked below it are
// rejected, so the content always equals the longest top-ranked prefix of
// everything offered that fits the budget.
class RankedBuffer {
 public:
  explicit RankedBuffer(std::size_t capacity_tuples = kDefaultCapacityTuples);

  // Returns true if the trajectory is stored after the call.
  bool insert(ScoredTrajectory scored);

  const std::vector<ScoredTrajectory>& trajectories() const { return items_; }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  std::size_t tuple_count() const { return tuple_count_; }
  std::size_t capacity() const { return capacity_; }
  std::optional<double> min_score() const;
  // Score of the cutoff; arrivals must rank above it. Never decreases.
  std::optional<double> admission_threshold() const;
  std::uint64_t inserts_offered() const { return next_age_; }

  struct TupleRef {
    const ScoredTrajectory* trajectory = nullptr;
    int step = 0;
    const gridworld::Observation& observation() const {
      return trajectory->record.observations[static_cast<std::size_t>(step)];
    }
    gridworld::Action action() const {
      return trajectory->record.actions[static_cast<std::size_t>(step)];
    }
  };

  // Tuple i in buffer order, 0 <= i < tuple_count().
  TupleRef tuple(std::size_t i) const;

  // Uniform with replacement over stored tuples. Throws on an empty buffer.
  std::vector<TupleRef> sample_batch(std::size_t batch_size, Rng& rng) const;

 private:
  void rebuild_offsets();

  std::size_t capacity_;
  std::vector<ScoredTrajectory> items_;
  std::vector<std::size_t> offsets_;  // cumulative lengths, offsets_[i] = start of item i
  std::size_t tuple_count_ = 0;
  std::uint64_t next_age_ = 0;
  std::optional<std::pair<double, std::uint64_t>> cutoff_;
};

}  // namespace pcgil::rapid

#endif  // PCGIL_RAPID_RAPID_BUFFER_HPP_
