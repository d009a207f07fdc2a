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

GaeResult compute_gae(const Rollout& rollout, double gamma, double lambda) {
  const std::size_t n = rollout.size();
  require(rollout.values.size() == n && rollout.rewards.size() == n && rollout.dones.size() == n &&
              rollout.truncated.size() == n && rollout.truncation_values.size() == n,
          ErrorCode::kInvalidArgument, "rollout columns have inconsistent lengths");
  GaeResult out;
  out.advantages.resize(static_cast<Eigen::Index>(n));
  out.value_targets.resize(static_cast<Eigen::Index>(n));
  double running = 0.0;
  for (std::size_t k = n; k-- > 0;) {
    double delta;
    if (rollout.dones[k]) {
      const double next_value = rollout.truncated[k] ? rollout.truncation_values[k] : 0.0;
      delta = rollout.rewards[k] + gamma * next_value - rollout.values[k];
      running = delta;
    } else {
      const double next_value = k + 1 == n ? rollout.bootstrap_value : rollout.values[k + 1];
      delta = rollout.rewards[k] + gamma * next_value - rollout.values[k];
      running = delta + gamma * lambda * running;
    }
    const auto i = static_cast<Eigen::Index>(k);
    out.advantages(i) = running;
    out.value_targets(i) = running + rollout.values[k];
  }
  return out;
}

void normalize_advantages(Eigen::VectorXd& advantages) {
  if (advantages.size() == 0) return;
  const double mean = advantages.mean();
  const double var = (advantages.array() - mean).square().mean();
  const double std = std::sqrt(var);
  if (std < 1e-8) return;
  advantages = ((advantages.array() - mean) / std).matrix();
}

}  // namespace pcgil::ppo
