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

#include "harness/runner.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include "common/error.hpp"
#include "common/rng.hpp"
#include "datasets/dataset.hpp"
#include "gridworld/environment.hpp"
#include "harness/metrics.hpp"
#include "imitation/behaviour_cloning.hpp"
#include "neuralnet/checkpoint.hpp"
#include "rapid/rapid_buffer.hpp"

namespace pcgil::harness {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Independent random streams of a run.
enum Stream : std::uint64_t {
  kInitStream = 1,
  kLevelStream = 2,
  kActionStream = 3,
  kUpdateStream = 4,
  kImitationStream = 5,
  kEvalStream = 6,
};

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorCode::kIo, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

data::Dataset prepare_dataset(const ExperimentConfig& config, const gridworld::LevelSpec& task) {
  data::Dataset ds = data::load_dataset(*config.dataset_path);
  const gridworld::LevelSpec& t = ds.task;
  require(t.family == task.family && t.num_rooms == task.num_rooms &&
              t.max_room_size == task.max_room_size && t.view_size == task.view_size,
          ErrorCode::kInvalidArgument,
          "dataset task (" + t.to_text() + ") does not match the configured task");
  if (!config.subset) return ds;
  data::SubsetSelection sel;
  sel.mode = config.subset->selection;
  sel.level_seeds = config.subset->level_seeds;
  std::optional<data::Dataset> other;
  if (sel.mode == data::SubsetMode::kCommonWith) {
    other = data::load_dataset(config.subset->other_dataset);
    sel.other = &*other;
  }
  return data::select_subset(ds, config.subset->n_levels, sel);
}

std::vector<std::uint64_t> dataset_levels(const data::Dataset& ds) {
  std::vector<std::uint64_t> seeds;
  std::set<std::uint64_t> seen;
  for (const auto& t : ds.trajectories) {
    if (seen.insert(t.record.level.seed).second) seeds.push_back(t.record.level.seed);
  }
  return seeds;
}

void write_pretrain_log(const fs::path& path, const imitation::PretrainResult& result) {
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorCode::kIo, "cannot write " + path.string());
  out << kPretrainHeader << '\n';
  for (const auto& row : result.log) {
    out << row.update_index << ',' << format_double(row.bc_loss) << ',';
    if (row.eval_return) out << format_double(*row.eval_return);
    out << '\n';
  }
}

RunArtifacts run_impl(const ExperimentConfig& config, std::uint64_t seed, const fs::path& dir,
                      const RunOptions& options) {
  const gridworld::LevelSpec task = config.effective_task();
  const Mode mode = config.mode;

  RunArtifacts art;
  art.dir = dir;
  art.mode = mode;
  art.seed = seed;
  art.resolved_config = dir / "config.resolved.json";
  art.metrics_csv = dir / "metrics.csv";
  art.summary = dir / "summary.json";
  art.actor = dir / "actor.pcgnet";
  art.critic = dir / "critic.pcgnet";

  ExperimentConfig resolved = config;
  resolved.seeds = {seed};
  write_json(art.resolved_config, to_json(resolved));

  Rng init_rng(derive_seed(seed, kInitStream));
  Rng action_rng(derive_seed(seed, kActionStream));
  Rng update_rng(derive_seed(seed, kUpdateStream));
  Rng il_rng(derive_seed(seed, kImitationStream));
  Rng eval_rng(derive_seed(seed, kEvalStream));

  const nn::AdamConfig adam = config.ppo.adam();
  ppo::ActorCritic ac =
      ppo::ActorCritic::create(gridworld::encoded_size(task.view_size), config.network, adam, init_rng);
  const std::uint64_t bc_before = imitation::bc_loss_evaluations();

  std::optional<data::Dataset> dataset;
  if (mode_needs_dataset(mode)) dataset = prepare_dataset(config, task);

  if (mode_pretrains(mode)) {
    const rapid::RankedBuffer source = data::to_buffer(*dataset);
    const std::vector<std::uint64_t> levels = dataset_levels(*dataset);
    // The probe draws from its own stream so probing never shifts training randomness.
    Rng probe_rng(derive_seed(seed, kEvalStream + 100));
    imitation::EvalProbe probe = [&](const nn::DenseNet& actor) {
      return ppo::evaluate(actor, task, levels, config.eval.episodes, config.eval.greedy, probe_rng)
          .mean;
    };
    imitation::PretrainResult pre =
        imitation::pretrain(ac.actor, source, config.il, adam, il_rng, probe, config.eval.probe_every);
    art.pretrain_log = dir / "pretrain_log.csv";
    write_pretrain_log(*art.pretrain_log, pre);
    art.il_updates += config.il.pretrain_updates;
    art.il_optimizer_steps += pre.optimizer_steps;
    art.pretrain_eval =
        ppo::evaluate(ac.actor, task, levels, config.eval.episodes, config.eval.greedy, eval_rng);
  }

  MetricsWriter metrics(art.metrics_csv);

  if (mode == Mode::kPureIl) {
    MetricsRow row;
    row.mean_return_100 = art.pretrain_eval->mean;
    row.std_return_100 = art.pretrain_eval->std;
    metrics.write(row);
    art.final_return = art.pretrain_eval->mean;
  } else {
    std::optional<rapid::RankedBuffer> live;
    std::optional<imitation::BehaviourCloner> cloner;
    rapid::VisitCounter counter;
    if (mode_concurrent(mode)) {
      live.emplace(config.capacity_tuples);
      if (dataset) {
        for (const auto& t : dataset->trajectories) live->insert(t);
      }
      cloner.emplace(ac.actor, config.il, adam);
    }
    data::CheckpointPolicy policy = config.checkpoint_policy();
    art.checkpoint_steps.assign(policy.thresholds().size(), std::nullopt);

    ppo::LevelSampler sampler(task, ppo::LevelSampler::first_seeds(config.num_train_levels),
                              derive_seed(seed, kLevelStream));
    ppo::RolloutCollector collector(std::move(sampler));
    RollingReturns rolling(static_cast<std::size_t>(config.rolling_window));
    std::vector<data::TrajectoryRecord> completed;

    const std::int64_t steps = config.ppo.steps_per_update;
    const std::int64_t total_updates = config.total_env_steps / steps;
    for (std::int64_t u = 1; u <= total_updates; ++u) {
      completed.clear();
      ppo::Rollout ro = collector.collect(ac.actor, ac.critic, static_cast<int>(steps), action_rng,
                                         &completed);
      for (const auto& traj : completed) {
        rolling.push(traj.episode_return);
        if (live) {
          counter.update(traj);
          live->insert(rapid::score_trajectory(traj, counter, config.rapid));
        }
      }
      art.episodes += static_cast<std::int64_t>(completed.size());

      ppo::GaeResult gae = ppo::compute_gae(ro, config.ppo.gamma, config.ppo.gae_lambda);
      ppo::PpoMetrics pm = ppo::ppo_update(ac, ro, gae, config.ppo, update_rng);
      art.ppo_optimizer_steps += pm.optimizer_steps;

      MetricsRow row;
      if (cloner) row.bc_loss = cloner->il_update(ac.actor, *live, il_rng);

      art.updates = u;
      art.env_steps = u * steps;
      row.env_steps = art.env_steps;
      row.updates = u;
      row.mean_return_100 = rolling.mean();
      row.std_return_100 = rolling.std();
      row.policy_loss = pm.policy_loss;
      row.value_loss = pm.value_loss;
      row.entropy = pm.entropy;
      row.clip_fraction = pm.clip_fraction;
      metrics.write(row);

      // Thresholds are only judged on a full window of episodes.
      if (rolling.full()) {
        const std::vector<bool> before = policy.fired();
        if (options.capture_checkpoints && live) {
          std::vector<data::Dataset> snaps =
              data::capture_checkpoint(*live, rolling.mean(), policy, task, config.rapid);
          for (const auto& snap : snaps) {
            const fs::path p = dir / ("dataset_" + snap.tag + ".pcgds");
            data::save_dataset(snap, p);
            art.datasets.push_back(p);
          }
        } else {
          policy.crossings(rolling.mean());
        }
        for (std::size_t i = 0; i < before.size(); ++i) {
          if (!before[i] && policy.fired()[i]) art.checkpoint_steps[i] = art.env_steps;
        }
      }
      if (options.capture_checkpoints && config.stop_after_last_checkpoint && policy.all_fired()) break;
    }
    art.final_return = rolling.mean();
    if (cloner) {
      art.il_updates += cloner->updates();
      art.il_optimizer_steps += cloner->optimizer_steps();
    }
    if (options.capture_checkpoints) {
      for (std::size_t i = 0; i < policy.thresholds().size(); ++i) {
        if (!policy.fired()[i]) {
          art.warnings.push_back("threshold " + format_double(policy.thresholds()[i]) + " (tag " +
                                 policy.tags()[i] + ") not reached within " +
                                 std::to_string(art.env_steps) + " env steps");
        }
      }
    }
  }

  nn::save_network(ac.actor, art.actor);
  nn::save_network(ac.critic, art.critic);
  art.bc_evaluations = imitation::bc_loss_evaluations() - bc_before;
  write_json(art.summary, artifacts_to_json(art));
  return art;
}

}  // namespace

json artifacts_to_json(const RunArtifacts& a) {
  json j;
  j["dir"] = a.dir.string();
  j["mode"] = mode_name(a.mode);
  j["seed"] = a.seed;
  j["metrics_csv"] = a.metrics_csv.string();
  j["resolved_config"] = a.resolved_config.string();
  j["actor"] = a.actor.string();
  j["critic"] = a.critic.string();
  j["pretrain_log"] = a.pretrain_log ? json(a.pretrain_log->string()) : json(nullptr);
  j["datasets"] = json::array();
  for (const auto& p : a.datasets) j["datasets"].push_back(p.string());
  j["env_steps"] = a.env_steps;
  j["updates"] = a.updates;
  j["episodes"] = a.episodes;
  j["il_updates"] = a.il_updates;
  j["il_optimizer_steps"] = a.il_optimizer_steps;
  j["ppo_optimizer_steps"] = a.ppo_optimizer_steps;
  j["final_return"] = a.final_return;
  if (a.pretrain_eval) {
    j["pretrain_eval"] = {{"mean", a.pretrain_eval->mean}, {"std", a.pretrain_eval->std}};
  } else {
    j["pretrain_eval"] = nullptr;
  }
  j["checkpoint_env_steps"] = json::array();
  for (const auto& s : a.checkpoint_steps) j["checkpoint_env_steps"].push_back(s ? json(*s) : json(nullptr));
  j["warnings"] = a.warnings;
  return j;
}

RunArtifacts run_single(const ExperimentConfig& config, std::uint64_t seed, const fs::path& dir,
                        const RunOptions& options) {
  config.validate();
  fs::create_directories(dir);
  try {
    return run_impl(config, seed, dir, options);
  } catch (const Error& e) {
    json record = {{"error", error_code_name(e.code())}, {"message", e.what()}, {"seed", seed}};
    std::ofstream(dir / "failure.json") << record.dump() << '\n';
    throw;
  }
}

std::vector<RunArtifacts> cmd_train(const ExperimentConfig& config, const fs::path& out_root,
                                    int jobs) {
  config.validate();
  require(jobs >= 1, ErrorCode::kInvalidArgument, "jobs must be >= 1");
  const std::size_t n = config.seeds.size();
  std::vector<std::optional<RunArtifacts>> results(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      const std::uint64_t s = config.seeds[i];
      try {
        results[i] = run_single(config, s, out_root / (std::string(mode_name(config.mode)) + "_seed" +
                                                         std::to_string(s)));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(jobs), n);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<RunArtifacts> out;
  for (auto& r : results) out.push_back(std::move(*r));
  return out;
}

RunArtifacts cmd_collect(const ExperimentConfig& config, const fs::path& out_dir) {
  require(config.mode == Mode::kRapidSelfImitation, ErrorCode::kInvalidArgument,
          "collect requires mode rapid_selfimitation");
  RunOptions opts;
  opts.capture_checkpoints = true;
  return run_single(config, config.seeds.front(), out_dir, opts);
}

RunArtifacts cmd_pretrain(const ExperimentConfig& config, const fs::path& out_dir) {
  ExperimentConfig c = config;
  c.mode = Mode::kPureIl;
  return run_single(c, c.seeds.front(), out_dir);
}

ppo::EvalResult cmd_eval(const EvalRequest& r) {
  r.task.validate();
  require(!r.level_seeds.empty(), ErrorCode::kInvalidArgument, "eval needs at least one level seed");
  require(r.episodes > 0, ErrorCode::kInvalidArgument, "episodes must be positive");
  nn::DenseNet actor = nn::load_network(r.actor);
  require(actor.input_dim() == gridworld::encoded_size(r.task.view_size) &&
              actor.output_dim() == gridworld::kNumActions,
          ErrorCode::kInvalidArgument, "actor shape does not match the task");
  Rng rng(derive_seed(r.seed, kEvalStream));
  return ppo::evaluate(actor, r.task, r.level_seeds, r.episodes, r.greedy, rng);
}

}  // namespace pcgil::harness
