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

#ifndef PCGIL_TESTS_TEST_SUPPORT_HPP_
#define PCGIL_TESTS_TEST_SUPPORT_HPP_

#include <cstdint>
#include <functional>
#include <vector>

#include "common/rng.hpp"
#include "datasets/dataset.hpp"
#include "neuralnet/dense_net.hpp"
#include "ppo/ppo.hpp"
#include "rapid/rapid_buffer.hpp"

namespace pcgil::testing {

nn::DenseNet small_net(int in, int out, int hidden, double out_gain, Rng& rng);

// Same net with every parameter redrawn from N(0, sd), so ratios and
// activations are far from degenerate.
void randomize(nn::DenseNet& net, double sd, Rng& rng);

struct FdReport {
  double max_rel_error = 0.0;
  double max_abs_error = 0.0;
  // Analytic and numeric values at the worst relative error.
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  std::size_t checked = 0;
};

// Central differences of f against analytic for every parameter of net.
// Relative error is |a - n| / max(|a|, |n|, floor).
FdReport check_gradient(const nn::DenseNet& net,
                        const std::function<double(const nn::DenseNet&)>& f,
                        const nn::LayerSet& analytic, double eps = 1e-6, double floor = 1e-5);

// Direct sum over k of (gamma*lambda)^k delta_{t+k}, stopping at episode ends.
ppo::GaeResult brute_force_gae(const ppo::Rollout& rollout, double gamma, double lambda);

// Random rewards, values and episode boundaries (some truncated).
ppo::Rollout random_rollout(Rng& rng, std::size_t steps);

// Trajectory with random observations; reward only on the last step.
data::TrajectoryRecord synthetic_trajectory(Rng& rng, const gridworld::LevelSpec& task,
                                            std::uint64_t level_seed, int length, double ret,
                                            int distinct_views = 0);

// Offer indices kept by a ranked buffer after the whole sequence: sort every
// offer by (score desc, offer index asc) and take the longest prefix whose
// lengths fit in capacity.
std::vector<std::size_t> brute_force_buffer(const std::vector<double>& scores,
                                            const std::vector<int>& lengths,
                                            std::size_t capacity);

data::BufferStats naive_stats(const data::Dataset& dataset);

// Dataset with the given (level seed, length, return) per trajectory, in that order.
struct TrajSpec {
  std::uint64_t level;
  int length;
  double ret;
};
data::Dataset make_dataset(const gridworld::LevelSpec& task, const std::vector<TrajSpec>& trajs,
                           Rng& rng);

// Replays the BFS-optimal solution of a generated level as a demonstration.
data::TrajectoryRecord optimal_demonstration(const gridworld::LevelSpec& level);

// Ranked dataset of demonstrations, scored by return only.
data::Dataset demonstration_dataset(const gridworld::LevelSpec& task,
                                    const std::vector<data::TrajectoryRecord>& demos);

}  // namespace pcgil::testing

#endif  // PCGIL_TESTS_TEST_SUPPORT_HPP_
