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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "common/error.hpp"
#include "neuralnet/softmax.hpp"
#include "ppo/ppo.hpp"

namespace pcgil::ppo {

LossAndGrads policy_loss(const nn::DenseNet& actor, const Eigen::MatrixXd& features,
                         std::span<const int> actions, std::span<const double> old_logprobs,
                         std::span<const double> advantages, double clip, double entropy_coef,
                         PolicyLossStats* stats) {
  const auto batch = features.cols();
  require(batch > 0 && static_cast<std::size_t>(batch) == actions.size() &&
              actions.size() == old_logprobs.size() && actions.size() == advantages.size(),
          ErrorCode::kInvalidArgument, "policy loss batch columns have inconsistent lengths");
  nn::ForwardCache cache;
  const Eigen::MatrixXd logits = actor.forward(features, &cache);
  const Eigen::MatrixXd logp = nn::log_softmax_columns(logits);
  const double inv_b = 1.0 / static_cast<double>(batch);

  Eigen::MatrixXd dlogits(logits.rows(), batch);
  double surrogate = 0.0;
  double entropy = 0.0;
  double ratio_sum = 0.0;
  double max_dev = 0.0;
  int clipped = 0;
  for (Eigen::Index i = 0; i < batch; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const int a = actions[k];
    require(a >= 0 && a < logits.rows(), ErrorCode::kInvalidArgument, "action id out of range");
    const Eigen::ArrayXd lp = logp.col(i).array();
    const Eigen::ArrayXd p = lp.exp();
    const double h = -(p * lp).sum();
    const double ratio = std::exp(lp(a) - old_logprobs[k]);
    const double adv = advantages[k];
    const double unclipped = ratio * adv;
    const double clipped_ratio = std::clamp(ratio, 1.0 - clip, 1.0 + clip);
    const double clipped_obj = clipped_ratio * adv;
    const bool use_unclipped = unclipped <= clipped_obj;
    surrogate -= std::min(unclipped, clipped_obj);
    entropy += h;
    ratio_sum += ratio;
    max_dev = std::max(max_dev, std::abs(ratio - 1.0));
    if (std::abs(ratio - 1.0) > clip) ++clipped;

    // d(-min(.))/dlogp_a, then through log-softmax; entropy term separately.
    const double g_logp = use_unclipped ? -ratio * adv : 0.0;
    Eigen::ArrayXd d = -g_logp * p;
    d(a) += g_logp;
    // dH/dz_j = -p_j (log p_j + H); loss carries -entropy_coef * H.
    d += entropy_coef * p * (lp + h);
    dlogits.col(i) = (d * inv_b).matrix();
  }

  LossAndGrads out;
  out.loss = (surrogate - entropy_coef * entropy) * inv_b;
  require(std::isfinite(out.loss), ErrorCode::kNonFinite, "non-finite policy loss");
  out.grads = actor.backward(cache, dlogits);
  if (stats) {
    stats->surrogate = surrogate * inv_b;
    stats->entropy = entropy * inv_b;
    stats->mean_ratio = ratio_sum * inv_b;
    stats->max_ratio_deviation = max_dev;
    stats->clip_fraction = clipped * inv_b;
  }
  return out;
}

LossAndGrads value_loss(const nn::DenseNet& critic, const Eigen::MatrixXd& features,
                        std::span<const double> targets, double value_coef) {
  const auto batch = features.cols();
  require(batch > 0 && static_cast<std::size_t>(batch) == targets.size(),
          ErrorCode::kInvalidArgument, "value loss batch columns have inconsistent lengths");
  nn::ForwardCache cache;
  const Eigen::MatrixXd v = critic.forward(features, &cache);
  const Eigen::Map<const Eigen::RowVectorXd> t(targets.data(), batch);
  const Eigen::RowVectorXd err = v.row(0) - t;
  const double inv_b = 1.0 / static_cast<double>(batch);
  LossAndGrads out;
  out.loss = value_coef * err.squaredNorm() * inv_b;
  require(std::isfinite(out.loss), ErrorCode::kNonFinite, "non-finite value loss");
  const Eigen::MatrixXd dv = (2.0 * value_coef * inv_b) * err;
  out.grads = critic.backward(cache, dv);
  return out;
}

PpoMetrics ppo_update(ActorCritic& ac, const Rollout& rollout, const GaeResult& gae,
                      const PpoConfig& config, Rng& rng) {
  config.validate();
  const auto n = static_cast<int>(rollout.size());
  require(n > 0 && gae.advantages.size() == n && gae.value_targets.size() == n,
          ErrorCode::kInvalidArgument, "GAE results do not match the rollout");

  Eigen::VectorXd advantages = gae.advantages;
  normalize_advantages(advantages);

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  const int mb_size = n / config.minibatches;
  const int dim = static_cast<int>(rollout.features.rows());

  PpoMetrics m;
  int batches = 0;
  Eigen::MatrixXd x(dim, mb_size);
  std::vector<int> acts(static_cast<std::size_t>(mb_size));
  std::vector<double> old_lp(acts.size()), adv(acts.size()), targets(acts.size());
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    // Fisher-Yates on the portable RNG.
    for (int i = n - 1; i > 0; --i) {
      const auto j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
      std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
    }
    for (int b = 0; b < config.minibatches; ++b) {
      for (int k = 0; k < mb_size; ++k) {
        const int idx = order[static_cast<std::size_t>(b * mb_size + k)];
        const auto kk = static_cast<std::size_t>(k);
        x.col(k) = rollout.features.col(idx);
        acts[kk] = rollout.actions[static_cast<std::size_t>(idx)];
        old_lp[kk] = rollout.logprobs[static_cast<std::size_t>(idx)];
        adv[kk] = advantages(idx);
        targets[kk] = gae.value_targets(idx);
      }
      PolicyLossStats stats;
      LossAndGrads pl = policy_loss(ac.actor, x, acts, old_lp, adv, config.clip,
                                    config.entropy_coef, &stats);
      LossAndGrads vl = value_loss(ac.critic, x, targets, config.value_coef);
      if (batches == 0) m.first_minibatch_ratio_deviation = stats.max_ratio_deviation;
      ac.actor_opt.step(ac.actor, std::move(pl.grads));
      ac.critic_opt.step(ac.critic, std::move(vl.grads));
      m.policy_loss += stats.surrogate;
      m.value_loss += vl.loss;
      m.entropy += stats.entropy;
      m.mean_ratio += stats.mean_ratio;
      m.clip_fraction += stats.clip_fraction;
      ++batches;
    }
  }
  const double inv = 1.0 / batches;
  m.policy_loss *= inv;
  m.value_loss *= inv;
  m.entropy *= inv;
  m.mean_ratio *= inv;
  m.clip_fraction *= inv;
  m.optimizer_steps = batches;
  return m;
}

}  // namespace pcgil::ppo
