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

#ifndef PCGIL_HARNESS_RUNNER_HPP_
#define PCGIL_HARNESS_RUNNER_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "harness/config.hpp"
#include "ppo/ppo.hpp"

#include "json.hpp"

namespace pcgil::harness {

// Files written by one run, relative paths resolved against the run directory:
//   config.resolved.json  metrics.csv  summary.json  actor.pcgnet  critic.pcgnet
//   pretrain_log.csv (pretraining modes)  dataset_<tag>.pcgds (collect)
struct RunArtifacts {
  std::filesystem::path dir;
  std::filesystem::path resolved_config;
  std::filesystem::path metrics_csv;
  std::filesystem::path summary;
  std::filesystem::path actor;
  std::filesystem::path critic;
  std::optional<std::filesystem::path> pretrain_log;
  std::vector<std::filesystem::path> datasets;

  Mode mode = Mode::kPureRl;
  std::uint64_t seed = 0;
  std::int64_t env_steps = 0;
  std::int64_t updates = 0;
  std::int64_t episodes = 0;
  std::int64_t il_updates = 0;
  std::int64_t il_optimizer_steps = 0;
  std::int64_t ppo_optimizer_steps = 0;
  std::uint64_t bc_evaluations = 0;
  // Rolling mean of the last rolling_window training episodes (pure_il: final evaluation).
  double final_return = 0.0;
  std::optional<ppo::EvalResult> pretrain_eval;
  // Env steps at which the rolling mean first reached each checkpoint threshold.
  std::vector<std::optional<std::int64_t>> checkpoint_steps;
  std::vector<std::string> warnings;
};

nlohmann::json artifacts_to_json(const RunArtifacts& run);

struct RunOptions {
  bool capture_checkpoints = false;
};

// One seed of one mode. The directory is created if needed.
RunArtifacts run_single(const ExperimentConfig& config, std::uint64_t seed,
                        const std::filesystem::path& dir, const RunOptions& options = {});

// One run per configured seed in <out_root>/<mode>_seed<seed>, up to `jobs`
// at a time.
std::vector<RunArtifacts> cmd_train(const ExperimentConfig& config,
                                    const std::filesystem::path& out_root, int jobs = 1);

// RAPID demonstrator on the first configured seed, capturing the checkpoint
// datasets into out_dir.
RunArtifacts cmd_collect(const ExperimentConfig& config, const std::filesystem::path& out_dir);

// Behaviour cloning only (pure_il) on the first configured seed.
RunArtifacts cmd_pretrain(const ExperimentConfig& config, const std::filesystem::path& out_dir);

struct EvalRequest {
  std::filesystem::path actor;
  gridworld::LevelSpec task;
  std::vector<std::uint64_t> level_seeds;
  int episodes = 100;
  bool greedy = false;
  std::uint64_t seed = 0;
};

ppo::EvalResult cmd_eval(const EvalRequest& request);

}  // namespace pcgil::harness

#endif  // PCGIL_HARNESS_RUNNER_HPP_
