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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pcgil/pcgil.h"

using nlohmann::json;

namespace {

struct CliError {
  pcgil_status status;
  std::string message;
};

void check(pcgil_status s) {
  if (s != PCGIL_OK) throw CliError{s, pcgil_last_error()};
}

// Takes ownership of a library string.
std::string take(char* s) {
  std::string out = s ? s : "";
  pcgil_string_free(s);
  return out;
}

// Flags that mirror ExperimentConfig fields; anything set overrides --config.
struct ConfigFlags {
  std::string config_path;
  std::optional<std::string> mode, family, dataset, subset_selection, subset_other;
  std::optional<int> rooms, size, t_max, view, t_max_override, pretrain_updates, eval_episodes,
      probe_every, hidden, steps_per_update;
  std::optional<std::int64_t> total_env_steps;
  std::optional<std::size_t> train_levels, subset_n, capacity;
  std::vector<std::uint64_t> seeds, subset_seeds;
  std::vector<double> thresholds;
  bool greedy = false;
  bool stop_after_last = false;

  void attach(CLI::App* app) {
    app->add_option("-c,--config", config_path, "JSON config file");
    app->add_option("--mode", mode, "pure_rl|rapid_selfimitation|pretrain_then_rl|concurrent|"
                                    "pretrain_plus_concurrent|pure_il");
    app->add_option("--family", family, "MultiRoom|KeyDoorBall");
    app->add_option("--rooms", rooms);
    app->add_option("--room-size", size);
    app->add_option("--t-max", t_max);
    app->add_option("--view", view);
    app->add_option("--train-levels", train_levels);
    app->add_option("--dataset", dataset);
    app->add_option("--total-env-steps", total_env_steps);
    app->add_option("--steps-per-update", steps_per_update);
    app->add_option("--seeds", seeds);
    app->add_option("--t-max-override", t_max_override);
    app->add_option("--pretrain-updates", pretrain_updates);
    app->add_option("--capacity", capacity, "ranked buffer capacity in tuples");
    app->add_option("--hidden", hidden);
    app->add_option("--subset-n", subset_n);
    app->add_option("--subset-selection", subset_selection, "first_n|common_with|explicit");
    app->add_option("--subset-other", subset_other);
    app->add_option("--subset-seeds", subset_seeds);
    app->add_option("--eval-episodes", eval_episodes);
    app->add_option("--probe-every", probe_every);
    app->add_flag("--greedy", greedy);
    app->add_option("--thresholds", thresholds, "checkpoint thresholds");
    app->add_flag("--stop-after-last-checkpoint", stop_after_last);
  }

  json build() const {
    json j = json::object();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw CliError{PCGIL_ERR_IO, "cannot open config " + config_path};
      try {
        in >> j;
      } catch (const json::exception& e) {
        throw CliError{PCGIL_ERR_FORMAT, std::string("config is not valid JSON: ") + e.what()};
      }
    }
    auto& task = j["task"];
    if (task.is_null()) task = json::object();
    if (family) task["family"] = *family;
    if (rooms) task["num_rooms"] = *rooms;
    if (size) task["max_room_size"] = *size;
    if (t_max) task["t_max"] = *t_max;
    if (view) task["view_size"] = *view;
    if (mode) j["mode"] = *mode;
    if (train_levels) j["num_train_levels"] = *train_levels;
    if (dataset) j["dataset_path"] = *dataset;
    if (total_env_steps) j["total_env_steps"] = *total_env_steps;
    if (steps_per_update) j["ppo"]["steps_per_update"] = *steps_per_update;
    if (!seeds.empty()) j["seeds"] = seeds;
    if (t_max_override) j["t_max_override"] = *t_max_override;
    if (pretrain_updates) j["il"]["pretrain_updates"] = *pretrain_updates;
    if (capacity) j["rapid"]["capacity_tuples"] = *capacity;
    if (hidden) j["network"]["hidden"] = *hidden;
    if (subset_n) {
      j["subset"]["n_levels"] = *subset_n;
      if (subset_selection) j["subset"]["selection"] = *subset_selection;
      if (subset_other) j["subset"]["other_dataset"] = *subset_other;
      if (!subset_seeds.empty()) j["subset"]["level_seeds"] = subset_seeds;
    }
    if (eval_episodes) j["eval"]["episodes"] = *eval_episodes;
    if (probe_every) j["eval"]["probe_every"] = *probe_every;
    if (greedy) j["eval"]["greedy"] = true;
    if (!thresholds.empty()) j["checkpoint_thresholds"] = thresholds;
    if (stop_after_last) j["stop_after_last_checkpoint"] = true;
    return j;
  }
};

void print_warnings(const json& run) {
  for (const auto& w : run.value("warnings", json::array())) {
    std::cerr << json{{"warning", w}}.dump() << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Offline-to-online imitation and RL experiments on procedurally generated gridworlds"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(pcgil_version()));

  ConfigFlags collect_flags, train_flags, pretrain_flags;
  std::string out_dir = "runs";
  int jobs = 1;

  CLI::App* collect = app.add_subcommand("collect", "Run the RAPID demonstrator and capture checkpoint datasets");
  collect_flags.attach(collect);
  collect->add_option("-o,--out", out_dir, "output directory");

  CLI::App* train = app.add_subcommand("train", "Train one run per seed");
  train_flags.attach(train);
  train->add_option("-o,--out", out_dir, "output root");
  train->add_option("-j,--jobs", jobs, "seeds run concurrently");

  CLI::App* pretrain = app.add_subcommand("pretrain", "Behaviour cloning from a dataset only");
  pretrain_flags.attach(pretrain);
  pretrain->add_option("-o,--out", out_dir, "output directory");

  CLI::App* eval = app.add_subcommand("eval", "Evaluate a saved actor");
  std::string actor, eval_family = "MultiRoom";
  int eval_rooms = 2, eval_size = 4, eval_view = 7, eval_episodes = 100;
  std::optional<int> eval_t_max;
  std::uint64_t first_level = 0, num_levels = 500, eval_seed = 0;
  bool eval_greedy = false;
  eval->add_option("--actor", actor)->required();
  eval->add_option("--family", eval_family);
  eval->add_option("--rooms", eval_rooms);
  eval->add_option("--room-size", eval_size);
  eval->add_option("--t-max", eval_t_max);
  eval->add_option("--view", eval_view);
  eval->add_option("--first-level", first_level, "first level seed");
  eval->add_option("--levels", num_levels, "number of consecutive level seeds");
  eval->add_option("--episodes", eval_episodes);
  eval->add_option("--seed", eval_seed);
  eval->add_flag("--greedy", eval_greedy);

  CLI::App* stats = app.add_subcommand("stats", "Dataset statistics");
  std::string stats_path, histogram_path;
  int bins = 10;
  stats->add_option("dataset", stats_path)->required();
  stats->add_option("--histogram", histogram_path, "write trajectory-length histogram CSV");
  stats->add_option("--bins", bins);

  CLI::App* subset = app.add_subcommand("subset", "Select one trajectory per level from a dataset");
  std::string subset_in, subset_out, selection = "first_n", other_path;
  std::size_t n_levels = 0;
  std::vector<std::uint64_t> explicit_seeds;
  subset->add_option("input", subset_in)->required();
  subset->add_option("-o,--out", subset_out)->required();
  subset->add_option("-n,--n-levels", n_levels)->required();
  subset->add_option("--selection", selection, "first_n|common_with|explicit");
  subset->add_option("--other", other_path, "dataset for common_with");
  subset->add_option("--seeds", explicit_seeds, "level seeds for explicit");

  CLI::App* report = app.add_subcommand("report", "Aggregate run directories into one CSV");
  std::vector<std::string> run_dirs;
  std::string report_out = "report.csv";
  report->add_option("runs", run_dirs)->required();
  report->add_option("-o,--out", report_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << json{{"error", "usage"}, {"message", e.what()}}.dump() << '\n';
    return 2;
  }

  try {
    if (*collect) {
      char* out = nullptr;
      check(pcgil_collect(collect_flags.build().dump().c_str(), out_dir.c_str(), &out));
      const json run = json::parse(take(out));
      print_warnings(run);
      std::cout << run.dump() << '\n';
    } else if (*train) {
      char* out = nullptr;
      check(pcgil_train(train_flags.build().dump().c_str(), out_dir.c_str(), jobs, &out));
      const json runs = json::parse(take(out));
      for (const auto& r : runs) print_warnings(r);
      std::cout << runs.dump() << '\n';
    } else if (*pretrain) {
      char* out = nullptr;
      check(pcgil_pretrain(pretrain_flags.build().dump().c_str(), out_dir.c_str(), &out));
      std::cout << take(out) << '\n';
    } else if (*eval) {
      json task = {{"family", eval_family}, {"num_rooms", eval_rooms},
                   {"max_room_size", eval_size}, {"view_size", eval_view}};
      if (eval_t_max) task["t_max"] = *eval_t_max;
      json req = {{"actor", actor},         {"task", task},
                  {"level_range", {first_level, num_levels}},
                  {"episodes", eval_episodes}, {"greedy", eval_greedy}, {"seed", eval_seed}};
      char* out = nullptr;
      check(pcgil_eval(req.dump().c_str(), &out));
      std::cout << take(out) << '\n';
    } else if (*stats) {
      pcgil_dataset* ds = nullptr;
      check(pcgil_dataset_load(stats_path.c_str(), &ds));
      pcgil_buffer_stats s{};
      const pcgil_status st = pcgil_dataset_stats(ds, &s);
      pcgil_status hs = PCGIL_OK;
      if (st == PCGIL_OK && !histogram_path.empty()) {
        hs = pcgil_dataset_histogram_csv(ds, bins, histogram_path.c_str());
      }
      pcgil_dataset_destroy(ds);
      check(st);
      check(hs);
      std::cout << json{{"n_levels", s.n_levels},
                        {"mean_traj_per_level", s.mean_traj_per_level},
                        {"mean_exp_per_traj", s.mean_exp_per_traj},
                        {"mean_return", s.mean_return},
                        {"n_trajectories", s.n_trajectories},
                        {"n_tuples", s.n_tuples}}
                       .dump()
                << '\n';
    } else if (*subset) {
      pcgil_dataset* ds = nullptr;
      pcgil_dataset* other = nullptr;
      pcgil_dataset* result = nullptr;
      check(pcgil_dataset_load(subset_in.c_str(), &ds));
      pcgil_status st = PCGIL_OK;
      if (!other_path.empty()) st = pcgil_dataset_load(other_path.c_str(), &other);
      if (st == PCGIL_OK) {
        st = pcgil_dataset_subset(ds, n_levels, selection.c_str(), other, explicit_seeds.data(),
                                  explicit_seeds.size(), &result);
      }
      if (st == PCGIL_OK) st = pcgil_dataset_save(result, subset_out.c_str());
      const std::string message = pcgil_last_error();
      pcgil_dataset_destroy(result);
      pcgil_dataset_destroy(other);
      pcgil_dataset_destroy(ds);
      if (st != PCGIL_OK) throw CliError{st, message};
      std::cout << json{{"written", subset_out}}.dump() << '\n';
    } else if (*report) {
      std::vector<const char*> dirs;
      for (const auto& d : run_dirs) dirs.push_back(d.c_str());
      check(pcgil_report(dirs.data(), dirs.size(), report_out.c_str()));
      std::cout << json{{"written", report_out}}.dump() << '\n';
    }
  } catch (const CliError& e) {
    std::cerr << json{{"error", pcgil_status_name(e.status)}, {"message", e.message}}.dump() << '\n';
    return static_cast<int>(e.status);
  } catch (const json::exception& e) {
    std::cerr << json{{"error", "internal"}, {"message", e.what()}}.dump() << '\n';
    return static_cast<int>(PCGIL_ERR_INTERNAL);
  }
  return 0;
}
