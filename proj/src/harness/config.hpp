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

#ifndef PCGIL_HARNESS_CONFIG_HPP_
#define PCGIL_HARNESS_CONFIG_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "datasets/dataset.hpp"
#include "gridworld/level_spec.hpp"
#include "imitation/behaviour_cloning.hpp"
#include "ppo/ppo.hpp"
#include "rapid/rapid_buffer.hpp"

#include "json.hpp"

namespace pcgil::harness {

enum class Mode {
  kPureRl,
  kRapidSelfImitation,
  kPretrainThenRl,
  kConcurrent,
  kPretrainPlusConcurrent,
  kPureIl,
};

const char* mode_name(Mode mode);
Mode parse_mode(std::string_view name);

bool mode_pretrains(Mode mode);
bool mode_concurrent(Mode mode);  // one il_update after each PPO update
bool mode_needs_dataset(Mode mode);

struct SubsetConfig {
  std::size_t n_levels = 0;
  data::SubsetMode selection = data::SubsetMode::kFirstN;
  std::string other_dataset;              // common_with
  std::vector<std::uint64_t> level_seeds;  // explicit
};

struct EvalConfig {
  int episodes = 100;
  bool greedy = false;
  // Extra pre-training probes every N updates (0: only after the last one).
  int probe_every = 0;
};

struct ExperimentConfig {
  gridworld::LevelSpec task = gridworld::multi_room_spec(2, 4, 40);
  std::size_t num_train_levels = 500;
  Mode mode = Mode::kPureRl;
  std::optional<std::string> dataset_path;
  imitation::IlConfig il;
  ppo::PpoConfig ppo;
  ppo::NetworkConfig network;
  rapid::RapidWeights rapid;
  std::size_t capacity_tuples = rapid::kDefaultCapacityTuples;
  std::int64_t total_env_steps = 300'000;
  std::vector<std::uint64_t> seeds = {0, 1, 2};
  std::optional<int> t_max_override;
  std::optional<SubsetConfig> subset;
  EvalConfig eval;
  // Empty: the task family's defaults.
  std::vector<double> checkpoint_thresholds;
  int rolling_window = 100;
  // collect only: end the run once every checkpoint has fired.
  bool stop_after_last_checkpoint = false;

  void validate() const;
  gridworld::LevelSpec effective_task() const;
  data::CheckpointPolicy checkpoint_policy() const;
};

nlohmann::json to_json(const ExperimentConfig& config);

// Missing keys take defaults; unknown keys are rejected.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

}  // namespace pcgil::harness

#endif  // PCGIL_HARNESS_CONFIG_HPP_
