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

#include "harness/config.hpp"

#include <fstream>
#include <set>

#include "common/error.hpp"

namespace pcgil::harness {

using nlohmann::json;

const char* mode_name(Mode mode) {
  switch (mode) {
    case Mode::kPureRl: return "pure_rl";
    case Mode::kRapidSelfImitation: return "rapid_selfimitation";
    case Mode::kPretrainThenRl: return "pretrain_then_rl";
    case Mode::kConcurrent: return "concurrent";
    case Mode::kPretrainPlusConcurrent: return "pretrain_plus_concurrent";
    case Mode::kPureIl: return "pure_il";
  }
  return "?";
}

Mode parse_mode(std::string_view name) {
  for (Mode m : {Mode::kPureRl, Mode::kRapidSelfImitation, Mode::kPretrainThenRl, Mode::kConcurrent,
                 Mode::kPretrainPlusConcurrent, Mode::kPureIl}) {
    if (name == mode_name(m)) return m;
  }
  fail(ErrorCode::kInvalidArgument, "unknown mode '" + std::string(name) + "'");
}

bool mode_pretrains(Mode mode) {
  return mode == Mode::kPretrainThenRl || mode == Mode::kPretrainPlusConcurrent ||
         mode == Mode::kPureIl;
}

bool mode_concurrent(Mode mode) {
  return mode == Mode::kConcurrent || mode == Mode::kPretrainPlusConcurrent ||
         mode == Mode::kRapidSelfImitation;
}

bool mode_needs_dataset(Mode mode) {
  return mode_pretrains(mode) || mode == Mode::kConcurrent;
}

namespace {

const char* selection_name(data::SubsetMode m) {
  switch (m) {
    case data::SubsetMode::kFirstN: return "first_n";
    case data::SubsetMode::kCommonWith: return "common_with";
    case data::SubsetMode::kExplicit: return "explicit";
  }
  return "?";
}

data::SubsetMode parse_selection(const std::string& s) {
  if (s == "first_n") return data::SubsetMode::kFirstN;
  if (s == "common_with") return data::SubsetMode::kCommonWith;
  if (s == "explicit") return data::SubsetMode::kExplicit;
  fail(ErrorCode::kInvalidArgument, "unknown subset selection '" + s + "'");
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const char* where) {
  require(j.is_object(), ErrorCode::kInvalidArgument, std::string(where) + " must be an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    require(ok.contains(key), ErrorCode::kInvalidArgument,
            "unknown config key '" + key + "' in " + where);
  }
}

template <typename T>
void get_if(const json& j, const char* key, T& out) {
  if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

}  // namespace

void ExperimentConfig::validate() const {
  task.validate();
  effective_task().validate();
  require(num_train_levels > 0, ErrorCode::kInvalidArgument, "num_train_levels must be positive");
  il.validate();
  ppo.validate();
  rapid.validate();
  require(capacity_tuples > 0, ErrorCode::kInvalidArgument, "capacity_tuples must be positive");
  require(total_env_steps >= 0, ErrorCode::kInvalidArgument, "total_env_steps must be >= 0");
  require(!seeds.empty(), ErrorCode::kInvalidArgument, "at least one run seed is required");
  require(network.hidden > 0, ErrorCode::kInvalidArgument, "hidden width must be positive");
  require(eval.episodes > 0, ErrorCode::kInvalidArgument, "eval.episodes must be positive");
  require(rolling_window > 0, ErrorCode::kInvalidArgument, "rolling_window must be positive");
  if (mode_needs_dataset(mode)) {
    require(dataset_path.has_value() && !dataset_path->empty(), ErrorCode::kInvalidArgument,
            std::string("mode ") + mode_name(mode) + " requires dataset_path");
  }
  if (subset) {
    require(subset->n_levels > 0, ErrorCode::kInvalidArgument, "subset.n_levels must be positive");
    require(dataset_path.has_value(), ErrorCode::kInvalidArgument, "subset requires dataset_path");
  }
  if (!checkpoint_thresholds.empty()) checkpoint_policy();
}

gridworld::LevelSpec ExperimentConfig::effective_task() const {
  gridworld::LevelSpec t = task.with_seed(0);
  if (t_max_override) t.t_max = *t_max_override;
  return t;
}

data::CheckpointPolicy ExperimentConfig::checkpoint_policy() const {
  if (checkpoint_thresholds.empty()) return data::CheckpointPolicy::for_task(task.family);
  std::vector<std::string> tags;
  if (checkpoint_thresholds.size() == 3) {
    tags = {"10", "60", "90"};
  } else {
    for (std::size_t i = 0; i < checkpoint_thresholds.size(); ++i) tags.push_back("c" + std::to_string(i));
  }
  return data::CheckpointPolicy(checkpoint_thresholds, tags);
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["task"] = {{"family", gridworld::task_family_name(c.task.family)},
               {"num_rooms", c.task.num_rooms},
               {"max_room_size", c.task.max_room_size},
               {"t_max", c.task.t_max},
               {"view_size", c.task.view_size}};
  j["num_train_levels"] = c.num_train_levels;
  j["mode"] = mode_name(c.mode);
  j["dataset_path"] = c.dataset_path ? json(*c.dataset_path) : json(nullptr);
  j["il"] = {{"batch_size", c.il.batch_size},
             {"epochs_per_update", c.il.epochs_per_update},
             {"pretrain_updates", c.il.pretrain_updates}};
  j["ppo"] = {{"steps_per_update", c.ppo.steps_per_update}, {"gamma", c.ppo.gamma},
              {"gae_lambda", c.ppo.gae_lambda},             {"clip", c.ppo.clip},
              {"epochs", c.ppo.epochs},                     {"minibatches", c.ppo.minibatches},
              {"entropy_coef", c.ppo.entropy_coef},         {"value_coef", c.ppo.value_coef},
              {"max_grad_norm", c.ppo.max_grad_norm},       {"learning_rate", c.ppo.learning_rate},
              {"adam_epsilon", c.ppo.adam_epsilon}};
  j["network"] = {{"hidden", c.network.hidden},
                  {"hidden_gain", c.network.hidden_gain},
                  {"policy_gain", c.network.policy_gain},
                  {"value_gain", c.network.value_gain}};
  j["rapid"] = {{"w0", c.rapid.w0}, {"w1", c.rapid.w1}, {"w2", c.rapid.w2},
                {"capacity_tuples", c.capacity_tuples}};
  j["total_env_steps"] = c.total_env_steps;
  j["seeds"] = c.seeds;
  j["t_max_override"] = c.t_max_override ? json(*c.t_max_override) : json(nullptr);
  if (c.subset) {
    j["subset"] = {{"n_levels", c.subset->n_levels},
                   {"selection", selection_name(c.subset->selection)},
                   {"other_dataset", c.subset->other_dataset},
                   {"level_seeds", c.subset->level_seeds}};
  } else {
    j["subset"] = nullptr;
  }
  j["eval"] = {{"episodes", c.eval.episodes},
               {"greedy", c.eval.greedy},
               {"probe_every", c.eval.probe_every}};
  j["checkpoint_thresholds"] = c.checkpoint_thresholds;
  j["rolling_window"] = c.rolling_window;
  j["stop_after_last_checkpoint"] = c.stop_after_last_checkpoint;
  return j;
}

ExperimentConfig config_from_json(const json& j) {
  check_keys(j,
             {"task", "num_train_levels", "mode", "dataset_path", "il", "ppo", "network", "rapid",
              "total_env_steps", "seeds", "t_max_override", "subset", "eval",
              "checkpoint_thresholds", "rolling_window", "stop_after_last_checkpoint"},
             "config");
  ExperimentConfig c;
  try {
    if (j.contains("task")) {
      const json& t = j.at("task");
      check_keys(t, {"family", "num_rooms", "max_room_size", "t_max", "view_size"}, "task");
      if (t.contains("family")) c.task.family = gridworld::parse_task_family(t.at("family").get<std::string>());
      if (c.task.family == gridworld::TaskFamily::kKeyDoorBall) c.task = gridworld::key_door_ball();
      get_if(t, "num_rooms", c.task.num_rooms);
      get_if(t, "max_room_size", c.task.max_room_size);
      if (t.contains("t_max")) {
        get_if(t, "t_max", c.task.t_max);
      } else if (c.task.family == gridworld::TaskFamily::kMultiRoom) {
        c.task.t_max = gridworld::default_multi_room_t_max(c.task.num_rooms);
      }
      get_if(t, "view_size", c.task.view_size);
    }
    get_if(j, "num_train_levels", c.num_train_levels);
    if (j.contains("mode")) c.mode = parse_mode(j.at("mode").get<std::string>());
    if (j.contains("dataset_path") && !j.at("dataset_path").is_null())
      c.dataset_path = j.at("dataset_path").get<std::string>();
    if (j.contains("il")) {
      const json& il = j.at("il");
      check_keys(il, {"batch_size", "epochs_per_update", "pretrain_updates"}, "il");
      get_if(il, "batch_size", c.il.batch_size);
      get_if(il, "epochs_per_update", c.il.epochs_per_update);
      get_if(il, "pretrain_updates", c.il.pretrain_updates);
    }
    if (j.contains("ppo")) {
      const json& p = j.at("ppo");
      check_keys(p,
                 {"steps_per_update", "gamma", "gae_lambda", "clip", "epochs", "minibatches",
                  "entropy_coef", "value_coef", "max_grad_norm", "learning_rate", "adam_epsilon"},
                 "ppo");
      get_if(p, "steps_per_update", c.ppo.steps_per_update);
      get_if(p, "gamma", c.ppo.gamma);
      get_if(p, "gae_lambda", c.ppo.gae_lambda);
      get_if(p, "clip", c.ppo.clip);
      get_if(p, "epochs", c.ppo.epochs);
      get_if(p, "minibatches", c.ppo.minibatches);
      get_if(p, "entropy_coef", c.ppo.entropy_coef);
      get_if(p, "value_coef", c.ppo.value_coef);
      get_if(p, "max_grad_norm", c.ppo.max_grad_norm);
      get_if(p, "learning_rate", c.ppo.learning_rate);
      get_if(p, "adam_epsilon", c.ppo.adam_epsilon);
    }
    if (j.contains("network")) {
      const json& n = j.at("network");
      check_keys(n, {"hidden", "hidden_gain", "policy_gain", "value_gain"}, "network");
      get_if(n, "hidden", c.network.hidden);
      get_if(n, "hidden_gain", c.network.hidden_gain);
      get_if(n, "policy_gain", c.network.policy_gain);
      get_if(n, "value_gain", c.network.value_gain);
    }
    if (j.contains("rapid")) {
      const json& r = j.at("rapid");
      check_keys(r, {"w0", "w1", "w2", "capacity_tuples"}, "rapid");
      get_if(r, "w0", c.rapid.w0);
      get_if(r, "w1", c.rapid.w1);
      get_if(r, "w2", c.rapid.w2);
      get_if(r, "capacity_tuples", c.capacity_tuples);
    }
    get_if(j, "total_env_steps", c.total_env_steps);
    get_if(j, "seeds", c.seeds);
    if (j.contains("t_max_override") && !j.at("t_max_override").is_null())
      c.t_max_override = j.at("t_max_override").get<int>();
    if (j.contains("subset") && !j.at("subset").is_null()) {
      const json& s = j.at("subset");
      check_keys(s, {"n_levels", "selection", "other_dataset", "level_seeds"}, "subset");
      SubsetConfig sc;
      get_if(s, "n_levels", sc.n_levels);
      if (s.contains("selection")) sc.selection = parse_selection(s.at("selection").get<std::string>());
      get_if(s, "other_dataset", sc.other_dataset);
      get_if(s, "level_seeds", sc.level_seeds);
      c.subset = sc;
    }
    if (j.contains("eval")) {
      const json& e = j.at("eval");
      check_keys(e, {"episodes", "greedy", "probe_every"}, "eval");
      get_if(e, "episodes", c.eval.episodes);
      get_if(e, "greedy", c.eval.greedy);
      get_if(e, "probe_every", c.eval.probe_every);
    }
    get_if(j, "checkpoint_thresholds", c.checkpoint_thresholds);
    get_if(j, "rolling_window", c.rolling_window);
    get_if(j, "stop_after_last_checkpoint", c.stop_after_last_checkpoint);
  } catch (const json::exception& e) {
    fail(ErrorCode::kInvalidArgument, std::string("bad config value: ") + e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::kIo, "cannot open config " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail(ErrorCode::kFormat, "config " + path + " is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

}  // namespace pcgil::harness
