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

#ifndef PCGIL_IMITATION_BEHAVIOUR_CLONING_HPP_
#define PCGIL_IMITATION_BEHAVIOUR_CLONING_HPP_

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "common/rng.hpp"
#include "neuralnet/adam.hpp"
#include "neuralnet/dense_net.hpp"
#include "rapid/rapid_buffer.hpp"

namespace pcgil::imitation {

struct IlConfig {
  int batch_size = 256;
  int epochs_per_update = 5;
  int pretrain_updates = 3000;
  void validate() const;
};

struct ImitationBatch {
  Eigen::MatrixXd features;  // observation_dim x batch
  std::vector<int> actions;
};

ImitationBatch make_batch(std::span<const rapid::RankedBuffer::TupleRef> tuples);

struct BcResult {
  double loss = 0.0;
  nn::LayerSet grads;  // actor gradients only
};

// Mean negative log-likelihood of the demonstrated actions.
BcResult bc_loss(const nn::DenseNet& actor, const ImitationBatch& batch);

// Process-wide count of bc_loss evaluations.
std::uint64_t bc_loss_evaluations();

// Imitation optimizer for one actor. Keeps its own Adam state so imitation
// steps never disturb the RL optimizer's moments.
class BehaviourCloner {
 public:
  BehaviourCloner(const nn::DenseNet& actor, IlConfig config, nn::AdamConfig adam);

  // One fresh batch from source, then epochs_per_update Adam steps on it.
  // Returns the loss measured before the first step.
  double il_update(nn::DenseNet& actor, const rapid::RankedBuffer& source, Rng& rng);

  std::int64_t updates() const { return updates_; }
  std::int64_t optimizer_steps() const { return adam_.steps(); }
  const IlConfig& config() const { return config_; }

 private:
  IlConfig config_;
  nn::Adam adam_;
  std::int64_t updates_ = 0;
};

struct PretrainLogRow {
  int update_index = 0;
  double bc_loss = 0.0;
  std::optional<double> eval_return;
};

struct PretrainResult {
  std::vector<PretrainLogRow> log;
  std::int64_t optimizer_steps = 0;
};

// Called every probe_every updates (and after the last one); returns an
// evaluation score for the log.
using EvalProbe = std::function<double(const nn::DenseNet& actor)>;

// pretrain_updates il_updates against a fixed source; no environment
// interaction and no RL loss.
PretrainResult pretrain(nn::DenseNet& actor, const rapid::RankedBuffer& source,
                        const IlConfig& config, const nn::AdamConfig& adam, Rng& rng,
                        const EvalProbe& probe = {}, int probe_every = 0);

}  // namespace pcgil::imitation

#endif  // PCGIL_IMITATION_BEHAVIOUR_CLONING_HPP_
