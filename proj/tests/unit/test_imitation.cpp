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
#include "doctest.h"
#include "gridworld/environment.hpp"
#include "imitation/behaviour_cloning.hpp"
#include "neuralnet/softmax.hpp"
#include "ppo/ppo.hpp"
#include "test_support.hpp"

using namespace pcgil;
using namespace pcgil::imitation;

namespace {

const gridworld::LevelSpec kTask = gridworld::multi_room_spec(2, 4, 40);
const int kDim = gridworld::encoded_size(7);

nn::DenseNet make_actor(std::uint64_t seed, int hidden = 16) {
  Rng rng(seed);
  return testing::small_net(kDim, gridworld::kNumActions, hidden, 0.01, rng);
}

rapid::RankedBuffer random_source(Rng& rng, int trajectories, int length) {
  rapid::RankedBuffer buf(100000);
  for (int i = 0; i < trajectories; ++i) {
    rapid::ScoredTrajectory s;
    s.record = testing::synthetic_trajectory(rng, kTask, static_cast<std::uint64_t>(i), length, 0.5);
    s.score = rng.uniform();
    buf.insert(s);
  }
  return buf;
}

double action_prob(const nn::DenseNet& actor, const ImitationBatch& batch, int col) {
  const Eigen::MatrixXd lp = nn::log_softmax_columns(actor.forward(batch.features.col(col)));
  return std::exp(lp(batch.actions[static_cast<std::size_t>(col)], 0));
}

}  // namespace

TEST_CASE("bc loss constants") {
  Rng rng(1);
  nn::DenseNet actor = make_actor(2);
  actor.layers().back().weight.setZero();
  actor.layers().back().bias.setZero();
  const rapid::RankedBuffer src = random_source(rng, 4, 20);
  for (int trial = 0; trial < 5; ++trial) {
    const auto batch = make_batch(src.sample_batch(1 + rng.below(300), rng));
    CHECK(std::abs(bc_loss(actor, batch).loss - std::log(7.0)) < 1e-12);
  }

  auto batch = make_batch(src.sample_batch(64, rng));
  for (auto& a : batch.actions) a = 4;
  actor.layers().back().bias(4) = 60.0;
  CHECK(bc_loss(actor, batch).loss < 1e-9);

  ImitationBatch empty;
  CHECK_THROWS_AS(bc_loss(actor, empty), Error);
}

TEST_CASE("bc gradient matches finite differences") {
  Rng rng(3);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int in = 2 + static_cast<int>(rng.below(5));
    nn::DenseNet actor = testing::small_net(in, 7, 2 + static_cast<int>(rng.below(6)), 1.0, rng);
    testing::randomize(actor, 0.6, rng);
    ImitationBatch batch;
    const int n = 1 + static_cast<int>(rng.below(8));
    batch.features.resize(in, n);
    for (Eigen::Index i = 0; i < batch.features.size(); ++i) batch.features.data()[i] = rng.normal();
    for (int i = 0; i < n; ++i) batch.actions.push_back(static_cast<int>(rng.below(7)));
    const BcResult r = bc_loss(actor, batch);
    auto f = [&](const nn::DenseNet& a) { return bc_loss(a, batch).loss; };
    worst = std::max(worst, testing::check_gradient(actor, f, r.grads).max_rel_error);
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("bc loss is invariant to duplicating the batch") {
  Rng rng(4);
  const nn::DenseNet actor = make_actor(5);
  const rapid::RankedBuffer src = random_source(rng, 3, 10);
  const auto refs = src.sample_batch(40, rng);
  std::vector<rapid::RankedBuffer::TupleRef> doubled(refs.begin(), refs.end());
  doubled.insert(doubled.end(), refs.begin(), refs.end());
  const BcResult a = bc_loss(actor, make_batch(refs));
  const BcResult b = bc_loss(actor, make_batch(doubled));
  CHECK(std::abs(a.loss - b.loss) < 1e-14);
  nn::LayerSet diff = a.grads;
  nn::LayerSet neg = b.grads;
  nn::scale(neg, -1.0);
  nn::add_to(diff, neg);
  CHECK(std::sqrt(nn::squared_norm(diff)) < 1e-14);
}

TEST_CASE("il_update") {
  SUBCASE("raises the probability of a single demonstrated tuple") {
    Rng rng(6);
    const rapid::RankedBuffer src = random_source(rng, 1, 1);
    nn::DenseNet actor = make_actor(7);
    const auto batch = make_batch(src.sample_batch(1, rng));
    const double before = action_prob(actor, batch, 0);
    BehaviourCloner cloner(actor, IlConfig{}, ppo::PpoConfig{}.adam());
    cloner.il_update(actor, src, rng);
    CHECK(action_prob(actor, batch, 0) > before);
    CHECK(cloner.optimizer_steps() == 5);
    CHECK(cloner.updates() == 1);
    cloner.il_update(actor, src, rng);
    CHECK(cloner.optimizer_steps() == 10);
  }
  SUBCASE("one batch of 256 reused for every epoch") {
    Rng rng(8);
    const rapid::RankedBuffer src = random_source(rng, 5, 30);
    nn::DenseNet actor = make_actor(9);
    BehaviourCloner cloner(actor, IlConfig{}, ppo::PpoConfig{}.adam());
    const std::uint64_t evals = bc_loss_evaluations();
    Rng replay = rng;
    const double first = cloner.il_update(actor, src, rng);
    CHECK(bc_loss_evaluations() - evals == 5);
    const auto batch = make_batch(src.sample_batch(256, replay));
    CHECK(first == bc_loss(make_actor(9), batch).loss);
    CHECK(rng.below(1000000) == replay.below(1000000));  // exactly one batch drawn
  }
  SUBCASE("deterministic") {
    Rng r1(10), r2(10);
    Rng s1(11), s2(11);
    const rapid::RankedBuffer src1 = random_source(s1, 4, 12);
    const rapid::RankedBuffer src2 = random_source(s2, 4, 12);
    nn::DenseNet a = make_actor(12), b = make_actor(12);
    BehaviourCloner ca(a, IlConfig{}, ppo::PpoConfig{}.adam());
    BehaviourCloner cb(b, IlConfig{}, ppo::PpoConfig{}.adam());
    for (int i = 0; i < 3; ++i) {
      ca.il_update(a, src1, r1);
      cb.il_update(b, src2, r2);
    }
    CHECK(a == b);
  }
  SUBCASE("never touches the critic or the RL optimiser") {
    Rng rng(13);
    ppo::NetworkConfig net;
    net.hidden = 16;
    ppo::ActorCritic ac = ppo::ActorCritic::create(kDim, net, ppo::PpoConfig{}.adam(), rng);
    const nn::DenseNet critic = ac.critic;
    const auto m = ac.actor_opt.first_moment();
    const rapid::RankedBuffer src = random_source(rng, 3, 10);
    BehaviourCloner cloner(ac.actor, IlConfig{}, ppo::PpoConfig{}.adam());
    cloner.il_update(ac.actor, src, rng);
    CHECK(ac.critic == critic);
    CHECK(ac.actor_opt.steps() == 0);
    CHECK(nn::squared_norm(ac.actor_opt.first_moment()) == nn::squared_norm(m));
  }
  SUBCASE("empty source") {
    Rng rng(14);
    nn::DenseNet actor = make_actor(15);
    BehaviourCloner cloner(actor, IlConfig{}, ppo::PpoConfig{}.adam());
    rapid::RankedBuffer empty(10);
    CHECK_THROWS_AS(cloner.il_update(actor, empty, rng), Error);
  }
}

TEST_CASE("pretrain") {
  SUBCASE("zero updates leave the actor unchanged") {
    Rng rng(16);
    const rapid::RankedBuffer src = random_source(rng, 2, 5);
    nn::DenseNet actor = make_actor(17);
    const nn::DenseNet before = actor;
    IlConfig cfg;
    cfg.pretrain_updates = 0;
    const PretrainResult r = pretrain(actor, src, cfg, ppo::PpoConfig{}.adam(), rng);
    CHECK(actor == before);
    CHECK(r.log.empty());
  }
  SUBCASE("log, probes and optimiser steps") {
    Rng rng(18);
    const rapid::RankedBuffer src = random_source(rng, 2, 5);
    nn::DenseNet actor = make_actor(19);
    IlConfig cfg;
    cfg.pretrain_updates = 20;
    int probes = 0;
    const PretrainResult r = pretrain(actor, src, cfg, ppo::PpoConfig{}.adam(), rng,
                                      [&](const nn::DenseNet&) { return ++probes; }, 8);
    CHECK(r.log.size() == 20);
    CHECK(r.optimizer_steps == 100);
    CHECK(probes == 3);  // after updates 8, 16 and the last
    CHECK(r.log[7].eval_return.has_value());
    CHECK_FALSE(r.log[8].eval_return.has_value());
    CHECK(r.log[19].eval_return.has_value());
    CHECK(r.log.back().bc_loss < r.log.front().bc_loss);
  }
  SUBCASE("demonstrations beat a random policy on their own levels") {
    std::vector<data::TrajectoryRecord> demos;
    std::vector<std::uint64_t> seeds;
    for (std::uint64_t s = 0; s < 5; ++s) {
      demos.push_back(testing::optimal_demonstration(kTask.with_seed(s)));
      seeds.push_back(s);
    }
    const data::Dataset ds = testing::demonstration_dataset(kTask, demos);
    const rapid::RankedBuffer src = data::to_buffer(ds);
    Rng rng(20);
    ppo::NetworkConfig net;
    ppo::ActorCritic ac = ppo::ActorCritic::create(kDim, net, ppo::PpoConfig{}.adam(), rng);
    Rng eval_a(21), eval_b(21);
    const double random_return = ppo::evaluate(ac.actor, kTask, seeds, 50, false, eval_a).mean;
    IlConfig cfg;
    cfg.pretrain_updates = 400;
    pretrain(ac.actor, src, cfg, ppo::PpoConfig{}.adam(), rng);
    const double trained_return = ppo::evaluate(ac.actor, kTask, seeds, 50, false, eval_b).mean;
    CHECK(trained_return > random_return);
    CHECK(trained_return > 0.5);
  }
}
