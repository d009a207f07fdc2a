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
#include "rapid/rapid_buffer.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "common/error.hpp"

namespace pcgil::rapid {

void RapidWeights::validate() const {
  require(w0 >= 0.0 && w1 >= 0.0 && w2 >= 0.0, ErrorCode::kInvalidArgument,
          "RAPID weights must be non-negative");
  require(w0 > 0.0 || w1 > 0.0 || w2 > 0.0, ErrorCode::kInvalidArgument,
          "at least one RAPID weight must be positive");
}

void VisitCounter::update(const data::TrajectoryRecord& trajectory) {
  for (const auto& obs : trajectory.observations) add(obs.hash());
}

void VisitCounter::add(std::uint64_t observation_hash, std::uint64_t times) {
  counts_[observation_hash] += times;
}

std::uint64_t VisitCounter::count(std::uint64_t observation_hash) const {
  const auto it = counts_.find(observation_hash);
  return it == counts_.end() ? 0 : it->second;
}

ScoredTrajectory score_trajectory(const data::TrajectoryRecord& record,
                                  const VisitCounter& counter, const RapidWeights& weights) {
  require(!record.empty(), ErrorCode::kInvalidArgument, "cannot score an empty trajectory");
  weights.validate();
  ScoredTrajectory out;
  out.record = record;
  out.s_ext = record.episode_return;

  std::unordered_set<std::uint64_t> distinct;
  double novelty = 0.0;
  for (const auto& obs : record.observations) {
    const std::uint64_t h = obs.hash();
    distinct.insert(h);
    const auto n = std::max<std::uint64_t>(1, counter.count(h));
    novelty += 1.0 / std::sqrt(static_cast<double>(n));
  }
  const double length = static_cast<double>(record.length());
  out.s_local = static_cast<double>(distinct.size()) / length;
  out.s_global = novelty / length;
  out.score = weights.w0 * out.s_ext + weights.w1 * out.s_local + weights.w2 * out.s_global;
  return out;
}

RankedBuffer::RankedBuffer(std::size_t capacity_tuples) : capacity_(capacity_tuples) {
  require(capacity_tuples > 0, ErrorCode::kInvalidArgument, "buffer capacity must be positive");
}

bool RankedBuffer::insert(ScoredTrajectory scored) {
  require(!scored.record.empty(), ErrorCode::kInvalidArgument,
          "cannot insert an empty trajectory");
  scored.age = next_age_++;
  if (cutoff_ && !ranks_before(scored.score, scored.age, cutoff_->first, cutoff_->second))
    return false;

  const auto pos = std::upper_bound(
      items_.begin(), items_.end(), scored, [](const ScoredTrajectory& a, const ScoredTrajectory& b) {
        return ranks_before(a.score, a.age, b.score, b.age);
      });
  const std::uint64_t age = scored.age;
  tuple_count_ += static_cast<std::size_t>(scored.record.length());
  items_.insert(pos, std::move(scored));

  bool kept = true;
  while (tuple_count_ > capacity_) {
    const ScoredTrajectory& last = items_.back();
    if (last.age == age) kept = false;
    if (!cutoff_ || ranks_before(last.score, last.age, cutoff_->first, cutoff_->second))
      cutoff_ = {last.score, last.age};
    tuple_count_ -= static_cast<std::size_t>(last.record.length());
    items_.pop_back();
  }
  rebuild_offsets();
  return kept;
}

std::optional<double> RankedBuffer::min_score() const {
  if (items_.empty()) return std::nullopt;
  return items_.back().score;
}

std::optional<double> RankedBuffer::admission_threshold() const {
  if (!cutoff_) return std::nullopt;
  return cutoff_->first;
}

void RankedBuffer::rebuild_offsets() {
  offsets_.resize(items_.size());
  std::size_t acc = 0;
  for (std::size_t i = 0; i < items_.size(); ++i) {
    offsets_[i] = acc;
    acc += static_cast<std::size_t>(items_[i].record.length());
  }
}

RankedBuffer::TupleRef RankedBuffer::tuple(std::size_t i) const {
  require(i < tuple_count_, ErrorCode::kInvalidArgument, "tuple index out of range");
  const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), i);
  const auto item = static_cast<std::size_t>(it - offsets_.begin()) - 1;
  return {&items_[item], static_cast<int>(i - offsets_[item])};
}

std::vector<RankedBuffer::TupleRef> RankedBuffer::sample_batch(std::size_t batch_size,
                                                               Rng& rng) const {
  require(!items_.empty(), ErrorCode::kInsufficientData, "cannot sample from an empty buffer");
  require(batch_size > 0, ErrorCode::kInvalidArgument, "batch size must be positive");
  std::vector<TupleRef> batch;
  batch.reserve(batch_size);
  for (std::size_t k = 0; k < batch_size; ++k) batch.push_back(tuple(rng.below(tuple_count_)));
  return batch;
}

}  // namespace pcgil::rapid
