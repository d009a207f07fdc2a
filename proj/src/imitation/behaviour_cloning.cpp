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

#include "imitation/behaviour_cloning.hpp"

#include <atomic>
#include <cmath>

#include "common/error.hpp"
#include "gridworld/environment.hpp"
#include "neuralnet/softmax.hpp"

namespace pcgil::imitation {

namespace {
std::atomic<std::uint64_t> g_bc_evaluations{0};
}  // namespace

void IlConfig::validate() const {
  require(batch_size > 0 && epochs_per_update > 0 && pretrain_updates >= 0,
          ErrorCode::kInvalidArgument, "imitation batch size and epochs must be positive");
}

std::uint64_t bc_loss_evaluations() { return g_bc_evaluations.load(); }

ImitationBatch make_batch(std::span<const rapid::RankedBuffer::TupleRef> tuples) {
  require(!tuples.empty(), ErrorCode::kInvalidArgument, "empty imitation batch");
  const int dim = gridworld::encoded_size(tuples.front().observation().view_size);
  ImitationBatch batch;
  batch.features.resize(dim, static_cast<Eigen::Index>(tuples.size()));
  batch.actions.reserve(tuples.size());
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    gridworld::encode_observation(
        tuples[i].observation(),
        {batch.features.col(static_cast<Eigen::Index>(i)).data(), static_cast<std::size_t>(dim)});
    batch.actions.push_back(static_cast<int>(tuples[i].action()));
  }
  return batch;
}

BcResult bc_loss(const nn::DenseNet& actor, const ImitationBatch& batch) {
  const auto n = batch.features.cols();
  require(n > 0 && static_cast<std::size_t>(n) == batch.actions.size(),
          ErrorCode::kInvalidArgument, "imitation batch is empty or inconsistent");
  ++g_bc_evaluations;
  nn::ForwardCache cache;
  const Eigen::MatrixXd logits = actor.forward(batch.features, &cache);
  const Eigen::MatrixXd logp = nn::log_softmax_columns(logits);
  const double inv_n = 1.0 / static_cast<double>(n);
  Eigen::MatrixXd dlogits = logp.array().exp().matrix() * inv_n;
  double loss = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const int a = batch.actions[static_cast<std::size_t>(i)];
    require(a >= 0 && a < logits.rows(), ErrorCode::kInvalidArgument, "action id out of range");
    loss -= logp(a, i);
    dlogits(a, i) -= inv_n;
  }
  BcResult out;
  out.loss = loss * inv_n;
  require(std::isfinite(out.loss), ErrorCode::kNonFinite, "non-finite behaviour cloning loss");
  out.grads = actor.backward(cache, dlogits);
  return out;
}

BehaviourCloner::BehaviourCloner(const nn::DenseNet& actor, IlConfig config, nn::AdamConfig adam)
    : config_(config), adam_(actor, adam) {
  config_.validate();
}

double BehaviourCloner::il_update(nn::DenseNet& actor, const rapid::RankedBuffer& source,
                                  Rng& rng) {
  require(!source.empty(), ErrorCode::kInsufficientData, "imitation source is empty");
  const auto tuples = source.sample_batch(static_cast<std::size_t>(config_.batch_size), rng);
  const ImitationBatch batch = make_batch(tuples);
  double first_loss = 0.0;
  for (int e = 0; e < config_.epochs_per_update; ++e) {
    BcResult r = bc_loss(actor, batch);
    if (e == 0) first_loss = r.loss;
    adam_.step(actor, std::move(r.grads));
  }
  ++updates_;
  return first_loss;
}

PretrainResult pretrain(nn::DenseNet& actor, const rapid::RankedBuffer& source,
                        const IlConfig& config, const nn::AdamConfig& adam, Rng& rng,
                        const EvalProbe& probe, int probe_every) {
  config.validate();
  PretrainResult result;
  if (config.pretrain_updates == 0) return result;
  require(!source.empty(), ErrorCode::kInsufficientData, "pre-training dataset is empty");
  BehaviourCloner cloner(actor, config, adam);
  result.log.reserve(static_cast<std::size_t>(config.pretrain_updates));
  for (int u = 0; u < config.pretrain_updates; ++u) {
    PretrainLogRow row;
    row.update_index = u;
    row.bc_loss = cloner.il_update(actor, source, rng);
    const bool last = u + 1 == config.pretrain_updates;
    if (probe && ((probe_every > 0 && (u + 1) % probe_every == 0) || last))
      row.eval_return = probe(actor);
    result.log.push_back(row);
  }
  result.optimizer_steps = cloner.optimizer_steps();
  return result;
}

}  // namespace pcgil::imitation
