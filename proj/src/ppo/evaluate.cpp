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
#include "ppo/ppo.hpp"

namespace pcgil::ppo {

EvalResult evaluate(const nn::DenseNet& actor, const gridworld::LevelSpec& task,
                    std::span<const std::uint64_t> level_seeds, int episodes, bool greedy,
                    Rng& rng) {
  require(!level_seeds.empty(), ErrorCode::kInvalidArgument, "evaluation needs level seeds");
  require(episodes > 0, ErrorCode::kInvalidArgument, "evaluation needs at least one episode");
  const int dim = gridworld::encoded_size(task.view_size);
  require(actor.input_dim() == dim, ErrorCode::kInvalidArgument,
          "actor input size does not match the task observation");
  EvalResult out;
  out.returns.reserve(static_cast<std::size_t>(episodes));
  Eigen::VectorXd x(dim);
  for (int e = 0; e < episodes; ++e) {
    const std::uint64_t seed = level_seeds[static_cast<std::size_t>(e) % level_seeds.size()];
    const gridworld::Level level = gridworld::generate_level(task.with_seed(seed));
    auto [state, obs] = gridworld::reset(level);
    double ret = 0.0;
    while (!state.finished()) {
      gridworld::encode_observation(obs, {x.data(), static_cast<std::size_t>(dim)});
      const PolicySample a = sample_action(actor, x, rng, greedy);
      gridworld::StepOutcome s = gridworld::step(state, static_cast<gridworld::Action>(a.action));
      ret += s.reward;
      obs = std::move(s.observation);
    }
    out.returns.push_back(ret);
  }
  double sum = 0.0;
  for (double r : out.returns) sum += r;
  out.mean = sum / episodes;
  double var = 0.0;
  for (double r : out.returns) var += (r - out.mean) * (r - out.mean);
  out.std = std::sqrt(var / episodes);
  return out;
}

}  // namespace pcgil::ppo
