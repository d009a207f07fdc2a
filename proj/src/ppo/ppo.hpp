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
#ifndef PCGIL_PPO_PPO_HPP_
#define PCGIL_PPO_PPO_HPP_

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "common/rng.hpp"
#include "datasets/trajectory.hpp"
#include "gridworld/environment.hpp"
#include "neuralnet/adam.hpp"
#include "neuralnet/dense_net.hpp"

namespace pcgil::ppo {

struct PpoConfig {
  int steps_per_update = 2048;
  double gamma = 0.99;
  double gae_lambda = 0.95;
  double clip = 0.2;
  int epochs = 4;
  int minibatches = 4;
  double entropy_coef = 0.01;
  double value_coef = 0.5;
  double max_grad_norm = 0.5;
  double learning_rate = 1e-4;
  double adam_epsilon = 1e-5;

  void validate() const;
  nn::AdamConfig adam() const {
    nn::AdamConfig c;
    c.learning_rate = learning_rate;
    c.epsilon = adam_epsilon;
    c.max_grad_norm = max_grad_norm;
    return c;
  }
};

struct NetworkConfig {
  int hidden = 64;
  double hidden_gain = 1.4142135623730951;
  double policy_gain = 0.01;
  double value_gain = 1.0;
};

// Independent actor and critic, each with its own optimizer.
struct ActorCritic {
  nn::DenseNet actor;
  nn::DenseNet critic;
  nn::Adam actor_opt;
  nn::Adam critic_opt;

  static ActorCritic create(int observation_dim, const NetworkConfig& net,
                            const nn::AdamConfig& adam, Rng& rng);
};

// Uniform draws over a fixed set of level seeds; generated levels are cached.
class LevelSampler {
 public:
  LevelSampler(gridworld::LevelSpec task, std::vector<std::uint64_t> seeds, std::uint64_t rng_seed);

  // Training seeds 0..n-1.
  static std::vector<std::uint64_t> first_seeds(std::size_t n);

  const gridworld::Level& next();
  const gridworld::Level& level(std::uint64_t seed);

  const gridworld::LevelSpec& task() const { return task_; }
  const std::vector<std::uint64_t>& seeds() const { return seeds_; }

 private:
  gridworld::LevelSpec task_;
  std::vector<std::uint64_t> seeds_;
  Rng rng_;
  std::map<std::uint64_t, std::unique_ptr<gridworld::Level>> cache_;
};

struct Rollout {
  Eigen::MatrixXd features;  // observation_dim x T
  std::vector<int> actions;
  std::vector<double> logprobs;
  std::vector<double> values;
  std::vector<double> rewards;
  std::vector<std::uint8_t> dones;
  std::vector<std::uint8_t> truncated;
  // Critic value of the final observation on truncated steps, 0 elsewhere.
  std::vector<double> truncation_values;
  // Critic value of the state following the last step (unused if it ended an episode).
  double bootstrap_value = 0.0;

  std::size_t size() const { return actions.size(); }
  friend bool operator==(const Rollout&, const Rollout&) = default;
};

// Samples an action from the actor's softmax policy.
struct PolicySample {
  int action = 0;
  double logprob = 0.0;
};
PolicySample sample_action(const nn::DenseNet& actor, const Eigen::VectorXd& features, Rng& rng,
                           bool greedy = false);

// Owns the environment stream; episodes continue across rollouts.
class RolloutCollector {
 public:
  explicit RolloutCollector(LevelSampler sampler);

  // Runs exactly `steps` transitions. Episodes finishing in this window are
  // appended to completed (when non-null), whether or not they started in it.
  Rollout collect(const nn::DenseNet& actor, const nn::DenseNet& critic, int steps, Rng& rng,
                  std::vector<data::TrajectoryRecord>* completed);

  std::int64_t env_steps() const { return env_steps_; }
  std::int64_t episodes_completed() const { return episodes_; }
  LevelSampler& sampler() { return sampler_; }

 private:
  void start_episode();

  LevelSampler sampler_;
  gridworld::EnvState state_;
  gridworld::Observation obs_;
  data::TrajectoryRecord current_;
  bool active_ = false;
  std::int64_t env_steps_ = 0;
  std::int64_t episodes_ = 0;
};

struct GaeResult {
  Eigen::VectorXd advantages;
  Eigen::VectorXd value_targets;
};

// GAE with episode-boundary masking; truncated steps bootstrap from
// truncation_values, terminated steps from zero.
GaeResult compute_gae(const Rollout& rollout, double gamma, double lambda);

// Mean 0 / std 1 in place (population std); left untouched if std < 1e-8.
void normalize_advantages(Eigen::VectorXd& advantages);

struct LossAndGrads {
  double loss = 0.0;
  nn::LayerSet grads;
};

struct PolicyLossStats {
  double surrogate = 0.0;  // -mean(min(rA, clip(r)A))
  double entropy = 0.0;    // mean entropy
  double mean_ratio = 0.0;
  double max_ratio_deviation = 0.0;
  double clip_fraction = 0.0;
};

// Clipped surrogate minus entropy bonus on a batch (columns of features).
LossAndGrads policy_loss(const nn::DenseNet& actor, const Eigen::MatrixXd& features,
                         std::span<const int> actions, std::span<const double> old_logprobs,
                         std::span<const double> advantages, double clip, double entropy_coef,
                         PolicyLossStats* stats = nullptr);

// value_coef * mean((V - target)^2).
LossAndGrads value_loss(const nn::DenseNet& critic, const Eigen::MatrixXd& features,
                        std::span<const double> targets, double value_coef);

struct PpoMetrics {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double mean_ratio = 0.0;
  double clip_fraction = 0.0;
  // Largest |ratio - 1| in the very first minibatch of the update.
  double first_minibatch_ratio_deviation = 0.0;
  int optimizer_steps = 0;
};

PpoMetrics ppo_update(ActorCritic& ac, const Rollout& rollout, const GaeResult& gae,
                      const PpoConfig& config, Rng& rng);

struct EvalResult {
  double mean = 0.0;
  double std = 0.0;
  std::vector<double> returns;
};

// Runs `episodes` episodes, cycling through level_seeds in order.
EvalResult evaluate(const nn::DenseNet& actor, const gridworld::LevelSpec& task,
                    std::span<const std::uint64_t> level_seeds, int episodes, bool greedy,
                    Rng& rng);

}  // namespace pcgil::ppo

#endif  // PCGIL_PPO_PPO_HPP_
