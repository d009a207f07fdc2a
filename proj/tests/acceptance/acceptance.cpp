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
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "common/error.hpp"
#include "common/rng.hpp"
#include "datasets/dataset.hpp"
#include "gridworld/environment.hpp"
#include "gridworld/solver.hpp"
#include "harness/config.hpp"
#include "harness/metrics.hpp"
#include "harness/runner.hpp"
#include "imitation/behaviour_cloning.hpp"
#include "neuralnet/softmax.hpp"
#include "ppo/ppo.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace pcgil;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

const double kInf = std::numeric_limits<double>::infinity();

// First logged env step at which a full rolling window reached `target`.
double steps_to_target(const fs::path& metrics, double target, int window, int t_max) {
  const std::int64_t full_after = static_cast<std::int64_t>(window) * t_max;
  for (const auto& row : harness::read_metrics_csv(metrics)) {
    if (row.env_steps >= full_after && row.mean_return_100 >= target) {
      return static_cast<double>(row.env_steps);
    }
  }
  return kInf;
}

class Suite {
 public:
  explicit Suite(fs::path work) : work_(std::move(work)) { fs::create_directories(work_); }

  Outcome reward_formula();
  Outcome gradients();
  Outcome gae();
  Outcome bc_constants();
  Outcome buffer_oracle();
  Outcome environment();
  Outcome offline_to_online();
  Outcome level_diversity();
  Outcome checkpoint_capture();
  Outcome determinism();

 private:
  const harness::RunArtifacts& demonstrator_n3s5();
  const harness::RunArtifacts& demonstrator_n2s4();

  fs::path work_;
  std::optional<harness::RunArtifacts> demo_n3s5_;
  std::optional<harness::RunArtifacts> demo_n2s4_;
};

// The reward is affine in the step count, so its value at a fractional
// expected length is the interpolation of the two neighbouring integers.
double reward_at(double steps, int t_max) {
  const int lo = static_cast<int>(std::floor(steps));
  const double frac = steps - lo;
  return (1.0 - frac) * gridworld::success_reward(lo, t_max) +
         frac * gridworld::success_reward(lo + 1, t_max);
}

Outcome Suite::reward_formula() {
  const double o1 = reward_at(25.6, gridworld::key_door_ball().t_max);
  const double mn = reward_at(93.3, gridworld::mn12s10().t_max);
  const bool pass = std::abs(o1 - 0.92) <= 0.005 && std::abs(mn - 0.65) <= 0.005 &&
                    gridworld::key_door_ball().t_max == 288 && gridworld::mn12s10().t_max == 240;
  return {pass, "O1Dlhb " + fmt(o1) + " vs 0.92, MN12S10 " + fmt(mn) + " vs 0.65"};
}

Outcome Suite::gradients() {
  Rng rng(2024);
  double worst_policy = 0.0, worst_entropy = 0.0, worst_value = 0.0, worst_bc = 0.0;
  const int trials = 100;
  for (int trial = 0; trial < trials; ++trial) {
    const int in = 3 + static_cast<int>(rng.below(5));
    const int hidden = 3 + static_cast<int>(rng.below(6));
    nn::DenseNet actor = testing::small_net(in, 7, hidden, 1.0, rng);
    nn::DenseNet critic = testing::small_net(in, 1, hidden, 1.0, rng);
    testing::randomize(actor, 0.6, rng);
    testing::randomize(critic, 0.6, rng);
    const int batch = 1 + static_cast<int>(rng.below(8));
    Eigen::MatrixXd x(in, batch);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.normal();
    const Eigen::MatrixXd lp = nn::log_softmax_columns(actor.forward(x));
    std::vector<int> acts;
    std::vector<double> old_lp, adv, zero_adv, targets;
    for (int b = 0; b < batch; ++b) {
      acts.push_back(static_cast<int>(rng.below(7)));
      // Ratios kept away from the clip kinks, where the surrogate is not differentiable.
      const double u = rng.uniform();
      const double shift = u < 0.5 ? 0.15 * (2.0 * rng.uniform() - 1.0)
                                   : (u < 0.75 ? 1.0 : -1.0) * (0.3 + 0.3 * rng.uniform());
      old_lp.push_back(lp(acts.back(), b) + shift);
      adv.push_back(rng.normal());
      zero_adv.push_back(0.0);
      targets.push_back(rng.normal());
    }

    const auto pl = ppo::policy_loss(actor, x, acts, old_lp, adv, 0.2, 0.01);
    worst_policy = std::max(
        worst_policy, testing::check_gradient(actor, [&](const nn::DenseNet& n) {
          return ppo::policy_loss(n, x, acts, old_lp, adv, 0.2, 0.01).loss;
        }, pl.grads).max_rel_error);

    const auto el = ppo::policy_loss(actor, x, acts, old_lp, zero_adv, 0.2, 1.0);
    worst_entropy = std::max(
        worst_entropy, testing::check_gradient(actor, [&](const nn::DenseNet& n) {
          return ppo::policy_loss(n, x, acts, old_lp, zero_adv, 0.2, 1.0).loss;
        }, el.grads).max_rel_error);

    const auto vl = ppo::value_loss(critic, x, targets, 0.5);
    worst_value = std::max(
        worst_value, testing::check_gradient(critic, [&](const nn::DenseNet& n) {
          return ppo::value_loss(n, x, targets, 0.5).loss;
        }, vl.grads).max_rel_error);

    imitation::ImitationBatch ib;
    ib.features = x;
    ib.actions = acts;
    const auto bl = imitation::bc_loss(actor, ib);
    worst_bc = std::max(
        worst_bc, testing::check_gradient(actor, [&](const nn::DenseNet& n) {
          return imitation::bc_loss(n, ib).loss;
        }, bl.grads).max_rel_error);
  }
  const double worst = std::max({worst_policy, worst_entropy, worst_value, worst_bc});
  return {worst < 1e-4, std::to_string(trials) + " cases each; max rel err policy " +
                            fmt(worst_policy) + " entropy " + fmt(worst_entropy) + " value " +
                            fmt(worst_value) + " bc " + fmt(worst_bc)};
}

Outcome Suite::gae() {
  Rng rng(77);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const ppo::Rollout r = testing::random_rollout(rng, 1 + rng.below(128));
    const double gamma = 0.9 + 0.1 * rng.uniform();
    const double lambda = rng.uniform();
    const auto fast = ppo::compute_gae(r, gamma, lambda);
    const auto slow = testing::brute_force_gae(r, gamma, lambda);
    worst = std::max(worst, (fast.advantages - slow.advantages).cwiseAbs().maxCoeff());
    worst = std::max(worst, (fast.value_targets - slow.value_targets).cwiseAbs().maxCoeff());
  }
  return {worst < 1e-10, "1000 rollouts, max abs err " + fmt(worst)};
}

Outcome Suite::bc_constants() {
  const gridworld::LevelSpec task = gridworld::multi_room_spec(2, 4, 40);
  Rng rng(5);

  // A zeroed output layer gives the uniform policy.
  ppo::NetworkConfig net;
  ppo::ActorCritic ac = ppo::ActorCritic::create(gridworld::encoded_size(7), net,
                                                 ppo::PpoConfig{}.adam(), rng);
  ac.actor.layers().back().weight.setZero();
  ac.actor.layers().back().bias.setZero();
  std::vector<data::TrajectoryRecord> demos;
  for (std::uint64_t s = 0; s < 5; ++s) demos.push_back(testing::optimal_demonstration(task.with_seed(s)));
  const data::Dataset toy = testing::demonstration_dataset(task, demos);
  const rapid::RankedBuffer source = data::to_buffer(toy);
  double worst_uniform = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto batch = imitation::make_batch(source.sample_batch(1 + rng.below(512), rng));
    worst_uniform = std::max(worst_uniform, std::abs(imitation::bc_loss(ac.actor, batch).loss - std::log(7.0)));
  }

  const fs::path dir = work_ / "c4";
  fs::create_directories(dir);
  data::save_dataset(toy, dir / "toy.pcgds");
  harness::ExperimentConfig cfg;
  cfg.task = task;
  cfg.mode = harness::Mode::kPureIl;
  cfg.dataset_path = (dir / "toy.pcgds").string();
  cfg.il.pretrain_updates = 3000;
  cfg.seeds = {0};
  const harness::RunArtifacts run = harness::cmd_pretrain(cfg, dir / "run");
  std::optional<int> reached;
  double final_loss = kInf;
  std::ifstream log(*run.pretrain_log);
  std::string line;
  std::getline(log, line);
  while (std::getline(log, line)) {
    const int index = std::stoi(line.substr(0, line.find(',')));
    const double loss = std::stod(line.substr(line.find(',') + 1));
    final_loss = loss;
    if (!reached && loss < 0.1) reached = index + 1;
  }
  const bool pass = worst_uniform <= 1e-6 && reached && *reached <= 3000 && run.il_updates == 3000;
  return {pass, "uniform |loss - ln7| " + fmt(worst_uniform) + "; toy loss < 0.1 after " +
                    (reached ? std::to_string(*reached) : std::string("never")) +
                    " il_updates, final " + fmt(final_loss)};
}

Outcome Suite::buffer_oracle() {
  Rng rng(99);
  int mismatches = 0;
  int trials = 0;
  std::size_t max_tuples_seen = 0;
  for (; trials < 1000; ++trials) {
    const std::size_t capacity = 1 + rng.below(60);
    const int n = 1 + static_cast<int>(rng.below(50));
    rapid::RankedBuffer buffer(capacity);
    std::vector<double> scores;
    std::vector<int> lengths;
    for (int i = 0; i < n; ++i) {
      rapid::ScoredTrajectory s;
      const int length = 1 + static_cast<int>(rng.below(12));
      s.record = testing::synthetic_trajectory(rng, gridworld::multi_room_spec(2, 4, 40), i, length, 0.5);
      s.score = std::floor(rng.uniform() * 8.0) / 8.0;  // frequent ties
      scores.push_back(s.score);
      lengths.push_back(length);
      buffer.insert(s);
      if (buffer.tuple_count() > capacity) ++mismatches;
    }
    const auto expected = testing::brute_force_buffer(scores, lengths, capacity);
    std::vector<std::uint64_t> got;
    for (const auto& t : buffer.trajectories()) got.push_back(t.record.level.seed);
    std::vector<std::uint64_t> want(expected.begin(), expected.end());
    if (got != want) ++mismatches;
  }

  // Default capacity under a long stream of real-length trajectories.
  rapid::RankedBuffer big(rapid::kDefaultCapacityTuples);
  for (int i = 0; i < 3000; ++i) {
    rapid::ScoredTrajectory s;
    s.record = testing::synthetic_trajectory(rng, gridworld::multi_room_spec(2, 4, 40), i,
                                             1 + static_cast<int>(rng.below(40)), 0.5);
    s.score = rng.uniform();
    big.insert(s);
    max_tuples_seen = std::max(max_tuples_seen, big.tuple_count());
  }
  const bool pass = mismatches == 0 && max_tuples_seen <= 10000 &&
                    rapid::kDefaultCapacityTuples == 10000;
  return {pass, std::to_string(trials) + " insert sequences, " + std::to_string(mismatches) +
                    " mismatches; default capacity peak " + std::to_string(max_tuples_seen) +
                    " tuples"};
}

Outcome Suite::environment() {
  const std::vector<std::pair<std::string, gridworld::LevelSpec>> tasks = {
      {"N2S4", gridworld::multi_room_spec(2, 4, 40)},
      {"N3S5", gridworld::multi_room_spec(3, 5, 60)},
      {"MN7S8", gridworld::mn7s8()},
      {"KeyDoorBall", gridworld::key_door_ball()},
  };
  int unsolvable = 0, nondeterministic = 0, overlong = 0, bad_reward = 0;
  Rng rng(31);
  for (const auto& [name, base] : tasks) {
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
      const gridworld::LevelSpec spec = base.with_seed(seed);
      const gridworld::Level a = gridworld::generate_level(spec);
      const gridworld::Level b = gridworld::generate_level(spec);
      if (a.grid.to_bytes() != b.grid.to_bytes() || a.agent_pos != b.agent_pos ||
          a.agent_dir != b.agent_dir || a.target_colour != b.target_colour) {
        ++nondeterministic;
      }
      if (!gridworld::check_solvable(a)) ++unsolvable;
      if (seed % 10 != 0) continue;
      // Random play: length bound and sparse reward.
      auto [state, obs] = gridworld::reset(a);
      int steps = 0;
      while (!state.finished()) {
        const auto out = gridworld::step(state, static_cast<gridworld::Action>(rng.below(gridworld::kNumActions)));
        ++steps;
        if (out.reward != 0.0 && !out.terminated) ++bad_reward;
        if (out.terminated && out.reward != gridworld::success_reward(steps, spec.t_max)) ++bad_reward;
      }
      if (steps > spec.t_max) ++overlong;
    }
  }
  const bool pass = unsolvable + nondeterministic + overlong + bad_reward == 0;
  return {pass, "4 tasks x 500 seeds: " + std::to_string(unsolvable) + " unsolvable, " +
                    std::to_string(nondeterministic) + " nondeterministic; random play: " +
                    std::to_string(overlong) + " over t_max, " + std::to_string(bad_reward) +
                    " bad rewards"};
}

const harness::RunArtifacts& Suite::demonstrator_n3s5() {
  if (!demo_n3s5_) {
    harness::ExperimentConfig cfg;
    cfg.task = gridworld::multi_room_spec(3, 5, 60);
    cfg.mode = harness::Mode::kRapidSelfImitation;
    cfg.total_env_steps = 2'500'000;
    cfg.seeds = {0};
    demo_n3s5_ = harness::cmd_collect(cfg, work_ / "demo_n3s5");
  }
  return *demo_n3s5_;
}

const harness::RunArtifacts& Suite::demonstrator_n2s4() {
  if (!demo_n2s4_) {
    harness::ExperimentConfig cfg;
    cfg.task = gridworld::multi_room_spec(2, 4, 40);
    cfg.mode = harness::Mode::kRapidSelfImitation;
    cfg.total_env_steps = 2'000'000;
    cfg.seeds = {0};
    cfg.stop_after_last_checkpoint = true;
    demo_n2s4_ = harness::cmd_collect(cfg, work_ / "demo_n2s4");
  }
  return *demo_n2s4_;
}

Outcome Suite::offline_to_online() {
  const harness::RunArtifacts& demo = demonstrator_n3s5();
  if (demo.datasets.size() != 3) return {false, "demonstrator did not reach the 90% checkpoint"};
  const fs::path dataset90 = demo.datasets.back();

  // Converged return: mean rolling return over the last tenth of training.
  const auto rows = harness::read_metrics_csv(demo.metrics_csv);
  const std::size_t tail = std::max<std::size_t>(1, rows.size() / 10);
  double converged = 0.0;
  for (std::size_t i = rows.size() - tail; i < rows.size(); ++i) converged += rows[i].mean_return_100;
  converged /= static_cast<double>(tail);
  const double target = 0.9 * converged;

  harness::ExperimentConfig base;
  base.task = gridworld::multi_room_spec(3, 5, 60);
  base.seeds = {0, 1, 2};
  std::map<std::string, double> medians;
  std::string detail;
  const std::vector<std::pair<harness::Mode, std::int64_t>> arms = {
      {harness::Mode::kPureRl, 1'500'000},
      {harness::Mode::kPretrainThenRl, 750'000},
      {harness::Mode::kPretrainPlusConcurrent, 750'000},
  };
  for (const auto& [mode, budget] : arms) {
    harness::ExperimentConfig cfg = base;
    cfg.mode = mode;
    cfg.total_env_steps = budget;
    if (harness::mode_needs_dataset(mode)) cfg.dataset_path = dataset90.string();
    std::vector<double> steps;
    for (const auto& run : harness::cmd_train(cfg, work_ / "c7")) {
      steps.push_back(steps_to_target(run.metrics_csv, target, cfg.rolling_window, cfg.task.t_max));
    }
    medians[harness::mode_name(mode)] = median(steps);
    detail += std::string(" ") + harness::mode_name(mode) + "=" +
              (std::isinf(median(steps)) ? std::string("not reached in ") + std::to_string(budget)
                                         : fmt(median(steps)));
  }
  const double ppo_steps = medians["pure_rl"];
  bool pass = true;
  for (const char* m : {"pretrain_then_rl", "pretrain_plus_concurrent"}) {
    const double s = medians[m];
    pass = pass && std::isfinite(s) && (std::isinf(ppo_steps) || s <= 0.5 * ppo_steps);
  }
  return {pass, "converged " + fmt(converged) + ", target " + fmt(target) +
                    "; median steps to target:" + detail};
}

Outcome Suite::level_diversity() {
  const harness::RunArtifacts& demo = demonstrator_n3s5();
  if (demo.datasets.size() != 3) return {false, "demonstrator did not reach the 90% checkpoint"};
  const data::Dataset full = data::load_dataset(demo.datasets.back());

  data::Dataset five_levels = data::select_subset(full, 5);
  data::Dataset one_level = full;
  one_level.trajectories.clear();
  std::map<std::uint64_t, int> per_level;
  for (const auto& t : full.trajectories) ++per_level[t.record.level.seed];
  std::optional<std::uint64_t> chosen;
  for (const auto& t : full.trajectories) {
    if (per_level[t.record.level.seed] >= 5) {
      chosen = t.record.level.seed;
      break;
    }
  }
  if (!chosen) return {false, "no level in the 90% dataset holds five trajectories"};
  for (const auto& t : full.trajectories) {
    if (t.record.level.seed == *chosen && one_level.trajectories.size() < 5) one_level.trajectories.push_back(t);
  }
  const fs::path dir = work_ / "c8";
  fs::create_directories(dir);
  data::save_dataset(five_levels, dir / "five_levels.pcgds");
  data::save_dataset(one_level, dir / "one_level.pcgds");

  auto final_median = [&](const std::string& name) {
    harness::ExperimentConfig cfg;
    cfg.task = gridworld::multi_room_spec(3, 5, 60);
    cfg.mode = harness::Mode::kPretrainThenRl;
    cfg.dataset_path = (dir / (name + ".pcgds")).string();
    cfg.total_env_steps = 1'000'000;
    cfg.seeds = {0, 1, 2};
    std::vector<double> finals;
    for (const auto& run : harness::cmd_train(cfg, dir / name)) finals.push_back(run.final_return);
    return median(finals);
  };
  const double diverse = final_median("five_levels");
  const double single = final_median("one_level");
  return {diverse >= single, "median final return: 5 levels " + fmt(diverse) + ", 1 level " + fmt(single)};
}

Outcome Suite::checkpoint_capture() {
  const harness::RunArtifacts& demo = demonstrator_n2s4();
  const std::vector<double> thresholds = {0.06, 0.4, 0.6};
  bool pass = demo.datasets.size() == 3 && demo.checkpoint_steps.size() == 3;
  std::string detail = std::to_string(demo.datasets.size()) + " datasets;";
  const int full_after = 100 * 40;
  const auto rows = harness::read_metrics_csv(demo.metrics_csv);
  for (std::size_t i = 0; pass && i < 3; ++i) {
    std::optional<std::int64_t> first;
    for (const auto& row : rows) {
      if (row.env_steps >= full_after && row.mean_return_100 >= thresholds[i]) {
        first = row.env_steps;
        break;
      }
    }
    pass = pass && first && demo.checkpoint_steps[i] == first;
    const data::Dataset ds = data::load_dataset(demo.datasets[i]);
    const fs::path copy = work_ / ("c9_copy_" + std::to_string(i) + ".pcgds");
    data::save_dataset(ds, copy);
    const bool round_trip = read_bytes(copy) == read_bytes(demo.datasets[i]);
    const bool stats_ok = data::compute_stats(ds) == testing::naive_stats(ds);
    pass = pass && round_trip && stats_ok && ds.tuple_count() <= 10000;
    detail += " " + fmt(thresholds[i]) + "@" + (first ? std::to_string(*first) : std::string("-")) +
              (round_trip ? " rt-ok" : " rt-bad") + (stats_ok ? " stats-ok" : " stats-bad");
  }
  return {pass, detail};
}

Outcome Suite::determinism() {
  const harness::RunArtifacts& demo = demonstrator_n2s4();
  if (demo.datasets.empty()) return {false, "no dataset to train from"};
  bool pass = true;
  std::string detail;
  for (harness::Mode mode : {harness::Mode::kPureRl, harness::Mode::kPretrainPlusConcurrent}) {
    harness::ExperimentConfig cfg;
    cfg.task = gridworld::multi_room_spec(2, 4, 40);
    cfg.mode = mode;
    cfg.total_env_steps = 100'000;
    cfg.il.pretrain_updates = 200;
    cfg.seeds = {0, 1};
    if (harness::mode_needs_dataset(mode)) cfg.dataset_path = demo.datasets.back().string();
    const auto first = harness::cmd_train(cfg, work_ / "c10_a");
    const auto second = harness::cmd_train(cfg, work_ / "c10_b");
    for (std::size_t i = 0; i < first.size(); ++i) {
      const std::string a = read_bytes(first[i].metrics_csv);
      const bool same = !a.empty() && a == read_bytes(second[i].metrics_csv);
      pass = pass && same;
      detail += std::string(" ") + harness::mode_name(mode) + "/seed" + std::to_string(first[i].seed) +
                (same ? " identical" : " differs");
    }
  }
  return {pass, detail};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::string work = "acceptance_work";
  std::vector<int> only;
  app.add_option("-w,--work-dir", work, "directory for run artifacts");
  app.add_option("--only", only, "criteria to run (default: all)");
  CLI11_PARSE(app, argc, argv);

  Suite suite(work);
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"reward formula", [&] { return suite.reward_formula(); }},
      {"gradient correctness", [&] { return suite.gradients(); }},
      {"gae oracle", [&] { return suite.gae(); }},
      {"bc constants", [&] { return suite.bc_constants(); }},
      {"ranked buffer oracle", [&] { return suite.buffer_oracle(); }},
      {"environment properties", [&] { return suite.environment(); }},
      {"offline-to-online speedup", [&] { return suite.offline_to_online(); }},
      {"level diversity", [&] { return suite.level_diversity(); }},
      {"checkpoint capture", [&] { return suite.checkpoint_capture(); }},
      {"determinism", [&] { return suite.determinism(); }},
  };
  const std::set<int> selected(only.begin(), only.end());
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    failures += out.pass ? 0 : 1;
    std::printf("CRITERION %d %s: %s: %s\n", id, out.pass ? "PASS" : "FAIL",
                criteria[i].first.c_str(), out.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
