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

#include <cmath>

#include "common/error.hpp"
#include "neuralnet/softmax.hpp"
#include "ppo/ppo.hpp"

namespace pcgil::ppo {

PolicySample sample_action(const nn::DenseNet& actor, const Eigen::VectorXd& features, Rng& rng,
                           bool greedy) {
  const Eigen::VectorXd logits = actor.forward(features).col(0);
  const nn::LogSoftmax ls = nn::softmax_logprob_entropy(logits);
  PolicySample out;
  if (greedy) {
    Eigen::Index best = 0;
    ls.log_probs.maxCoeff(&best);
    out.action = static_cast<int>(best);
  } else {
    const Eigen::VectorXd p = ls.probs();
    out.action = static_cast<int>(rng.categorical({p.data(), static_cast<std::size_t>(p.size())}));
  }
  out.logprob = ls.log_probs(out.action);
  return out;
}

RolloutCollector::RolloutCollector(LevelSampler sampler) : sampler_(std::move(sampler)) {}

void RolloutCollector::start_episode() {
  const gridworld::Level& level = sampler_.next();
  auto [state, obs] = gridworld::reset(level);
  state_ = std::move(state);
  obs_ = std::move(obs);
  current_ = data::TrajectoryRecord{};
  current_.level = level.spec;
  active_ = true;
}

Rollout RolloutCollector::collect(const nn::DenseNet& actor, const nn::DenseNet& critic, int steps,
                                  Rng& rng, std::vector<data::TrajectoryRecord>* completed) {
  require(steps > 0, ErrorCode::kInvalidArgument, "rollout length must be positive");
  const int dim = gridworld::encoded_size(sampler_.task().view_size);
  require(actor.input_dim() == dim && critic.input_dim() == dim, ErrorCode::kInvalidArgument,
          "network input size does not match the task observation");
  require(actor.output_dim() == gridworld::kNumActions && critic.output_dim() == 1,
          ErrorCode::kInvalidArgument, "network output size does not match actor/critic roles");

  Rollout ro;
  const auto n = static_cast<std::size_t>(steps);
  ro.features.resize(dim, steps);
  ro.actions.reserve(n);
  ro.logprobs.reserve(n);
  ro.values.reserve(n);
  ro.rewards.reserve(n);
  ro.dones.reserve(n);
  ro.truncated.reserve(n);
  ro.truncation_values.reserve(n);

  Eigen::VectorXd x(dim);
  for (int t = 0; t < steps; ++t) {
    if (!active_) start_episode();
    gridworld::encode_observation(obs_, {x.data(), static_cast<std::size_t>(dim)});
    ro.features.col(t) = x;
    const PolicySample a = sample_action(actor, x, rng);
    const double value = critic.forward(x)(0, 0);

    const gridworld::StepOutcome out =
        gridworld::step(state_, static_cast<gridworld::Action>(a.action));
    current_.push(obs_, static_cast<gridworld::Action>(a.action), out.reward);
    ++env_steps_;

    ro.actions.push_back(a.action);
    ro.logprobs.push_back(a.logprob);
    ro.values.push_back(value);
    ro.rewards.push_back(out.reward);
    const bool done = out.terminated || out.truncated;
    ro.dones.push_back(done ? 1 : 0);
    ro.truncated.push_back(out.truncated && !out.terminated ? 1 : 0);
    if (out.truncated && !out.terminated) {
      Eigen::VectorXd final_x(dim);
      gridworld::encode_observation(out.observation,
                                    {final_x.data(), static_cast<std::size_t>(dim)});
      ro.truncation_values.push_back(critic.forward(final_x)(0, 0));
    } else {
      ro.truncation_values.push_back(0.0);
    }

    if (done) {
      current_.terminated = out.terminated;
      ++episodes_;
      if (completed) completed->push_back(std::move(current_));
      current_ = data::TrajectoryRecord{};
      active_ = false;
    } else {
      obs_ = out.observation;
    }
  }

  if (active_) {
    gridworld::encode_observation(obs_, {x.data(), static_cast<std::size_t>(dim)});
    ro.bootstrap_value = critic.forward(x)(0, 0);
  }
  return ro;
}

}  // namespace pcgil::ppo
