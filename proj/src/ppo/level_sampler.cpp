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

#include <numeric>

#include "common/error.hpp"
#include "ppo/ppo.hpp"

namespace pcgil::ppo {

void PpoConfig::validate() const {
  require(steps_per_update > 0 && epochs > 0 && minibatches > 0, ErrorCode::kInvalidArgument,
          "PPO step/epoch/minibatch counts must be positive");
  require(minibatches <= steps_per_update, ErrorCode::kInvalidArgument,
          "more minibatches than samples per update");
  require(clip > 0.0 && clip < 1.0, ErrorCode::kInvalidArgument, "clip must be in (0, 1)");
  require(gamma > 0.0 && gamma < 1.0 && gae_lambda > 0.0 && gae_lambda < 1.0,
          ErrorCode::kInvalidArgument, "gamma and lambda must be in (0, 1)");
  require(entropy_coef > 0.0 && value_coef > 0.0 && max_grad_norm > 0.0 && learning_rate > 0.0 &&
              adam_epsilon > 0.0,
          ErrorCode::kInvalidArgument, "PPO coefficients must be positive");
}

ActorCritic ActorCritic::create(int observation_dim, const NetworkConfig& net,
                                const nn::AdamConfig& adam, Rng& rng) {
  nn::InitConfig init;
  init.hidden = net.hidden;
  init.hidden_gain = net.hidden_gain;
  ActorCritic ac;
  ac.actor = nn::DenseNet::create(observation_dim, gridworld::kNumActions, net.policy_gain, init, rng);
  ac.critic = nn::DenseNet::create(observation_dim, 1, net.value_gain, init, rng);
  ac.actor_opt = nn::Adam(ac.actor, adam);
  ac.critic_opt = nn::Adam(ac.critic, adam);
  return ac;
}

LevelSampler::LevelSampler(gridworld::LevelSpec task, std::vector<std::uint64_t> seeds,
                           std::uint64_t rng_seed)
    : task_(task), seeds_(std::move(seeds)), rng_(rng_seed) {
  task_.validate();
  require(!seeds_.empty(), ErrorCode::kInvalidArgument, "level sampler needs at least one seed");
}

std::vector<std::uint64_t> LevelSampler::first_seeds(std::size_t n) {
  std::vector<std::uint64_t> seeds(n);
  std::iota(seeds.begin(), seeds.end(), std::uint64_t{0});
  return seeds;
}

const gridworld::Level& LevelSampler::next() { return level(seeds_[rng_.below(seeds_.size())]); }

const gridworld::Level& LevelSampler::level(std::uint64_t seed) {
  auto it = cache_.find(seed);
  if (it == cache_.end()) {
    it = cache_
             .emplace(seed, std::make_unique<gridworld::Level>(
                                gridworld::generate_level(task_.with_seed(seed))))
             .first;
  }
  return *it->second;
}

}  // namespace pcgil::ppo
