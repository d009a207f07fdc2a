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
#ifndef PCGIL_DATASETS_TRAJECTORY_HPP_
#define PCGIL_DATASETS_TRAJECTORY_HPP_

#include <vector>

#include "gridworld/environment.hpp"

namespace pcgil::data {

// One episode as the agent experienced it: the observation it acted on, the
// action taken, and the reward that followed.
struct TrajectoryRecord {
  gridworld::LevelSpec level;
  std::vector<gridworld::Observation> observations;
  std::vector<gridworld::Action> actions;
  std::vector<double> rewards;
  double episode_return = 0.0;
  bool terminated = false;

  int length() const { return static_cast<int>(actions.size()); }
  bool empty() const { return actions.empty(); }

  void push(gridworld::Observation obs, gridworld::Action action, double reward) {
    observations.push_back(std::move(obs));
    actions.push_back(action);
    rewards.push_back(reward);
    episode_return += reward;
  }

  // Throws Error(kFormat) when the record breaks its invariants.
  void validate() const;

  friend bool operator==(const TrajectoryRecord&, const TrajectoryRecord&) = default;
};

}  // namespace pcgil::data

#endif  // PCGIL_DATASETS_TRAJECTORY_HPP_
