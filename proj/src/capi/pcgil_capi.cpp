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

#include "pcgil/pcgil.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <string>

#include "common/error.hpp"
#include "datasets/dataset.hpp"
#include "gridworld/environment.hpp"
#include "gridworld/solver.hpp"
#include "harness/config.hpp"
#include "harness/report.hpp"
#include "harness/runner.hpp"

#include "json.hpp"

using nlohmann::json;
namespace gw = pcgil::gridworld;
namespace hn = pcgil::harness;

struct pcgil_env {
  gw::Level level;
  gw::EnvState state;
  gw::Observation obs;
};

struct pcgil_dataset {
  pcgil::data::Dataset data;
};

namespace {

thread_local std::string g_last_error;

pcgil_status set_error(pcgil_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs body, translating exceptions into status codes.
template <typename F>
pcgil_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return PCGIL_OK;
  } catch (const pcgil::Error& e) {
    return set_error(static_cast<pcgil_status>(e.code()), e.what());
  } catch (const json::exception& e) {
    return set_error(PCGIL_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return set_error(PCGIL_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(PCGIL_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(PCGIL_ERR_INTERNAL, "unknown error");
  }
}

void need(const void* p, const char* name) {
  pcgil::require(p != nullptr, pcgil::ErrorCode::kInvalidArgument,
                 std::string(name) + " must not be null");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit(char** result_json, const json& j) {
  if (result_json != nullptr) *result_json = dup_string(j.dump());
}

hn::ExperimentConfig parse_config(const char* config_json) {
  need(config_json, "config_json");
  json j;
  try {
    j = json::parse(config_json);
  } catch (const json::exception& e) {
    pcgil::fail(pcgil::ErrorCode::kFormat, std::string("config is not valid JSON: ") + e.what());
  }
  return hn::config_from_json(j);
}

}  // namespace

extern "C" {

const char* pcgil_version(void) { return "0.1.0"; }

const char* pcgil_last_error(void) { return g_last_error.c_str(); }

const char* pcgil_status_name(pcgil_status status) {
  if (status == PCGIL_OK) return "ok";
  return pcgil::error_code_name(static_cast<pcgil::ErrorCode>(status));
}

void pcgil_string_free(char* s) { std::free(s); }

pcgil_status pcgil_env_create(const char* level, pcgil_env** out) {
  return guarded([&] {
    need(level, "level");
    need(out, "out");
    *out = nullptr;
    auto env = std::make_unique<pcgil_env>();
    env->level = gw::generate_level(gw::LevelSpec::from_text(level));
    auto [state, obs] = gw::reset(env->level);
    env->state = std::move(state);
    env->obs = std::move(obs);
    *out = env.release();
  });
}

void pcgil_env_destroy(pcgil_env* env) { delete env; }

pcgil_status pcgil_env_reset(pcgil_env* env) {
  return guarded([&] {
    need(env, "env");
    auto [state, obs] = gw::reset(env->level);
    env->state = std::move(state);
    env->obs = std::move(obs);
  });
}

pcgil_status pcgil_env_step(pcgil_env* env, int action, double* reward, int* terminated,
                            int* truncated) {
  return guarded([&] {
    need(env, "env");
    pcgil::require(action >= 0 && action < gw::kNumActions, pcgil::ErrorCode::kInvalidArgument,
                   "action out of range");
    gw::StepOutcome o = gw::step(env->state, static_cast<gw::Action>(action));
    env->obs = std::move(o.observation);
    if (reward) *reward = o.reward;
    if (terminated) *terminated = o.terminated ? 1 : 0;
    if (truncated) *truncated = o.truncated ? 1 : 0;
  });
}

pcgil_status pcgil_env_observation_size(const pcgil_env* env, size_t* size) {
  return guarded([&] {
    need(env, "env");
    need(size, "size");
    *size = env->obs.view.size();
  });
}

pcgil_status pcgil_env_observation(const pcgil_env* env, uint8_t* view, size_t size,
                                   int* direction) {
  return guarded([&] {
    need(env, "env");
    need(view, "view");
    pcgil::require(size == env->obs.view.size(), pcgil::ErrorCode::kInvalidArgument,
                   "view buffer has the wrong size");
    std::memcpy(view, env->obs.view.data(), size);
    if (direction) *direction = env->obs.direction;
  });
}

pcgil_status pcgil_env_step_count(const pcgil_env* env, int* steps) {
  return guarded([&] {
    need(env, "env");
    need(steps, "steps");
    *steps = env->state.step_count;
  });
}

pcgil_status pcgil_check_solvable(const char* level, int* solvable, int* optimal_steps) {
  return guarded([&] {
    need(level, "level");
    need(solvable, "solvable");
    const gw::Level lv = gw::generate_level(gw::LevelSpec::from_text(level));
    auto sol = gw::shortest_solution(lv);
    *solvable = sol ? 1 : 0;
    if (optimal_steps) *optimal_steps = sol ? static_cast<int>(sol->actions.size()) : -1;
  });
}

pcgil_status pcgil_dataset_load(const char* path, pcgil_dataset** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = nullptr;
    auto ds = std::make_unique<pcgil_dataset>();
    ds->data = pcgil::data::load_dataset(path);
    *out = ds.release();
  });
}

void pcgil_dataset_destroy(pcgil_dataset* dataset) { delete dataset; }

pcgil_status pcgil_dataset_save(const pcgil_dataset* dataset, const char* path) {
  return guarded([&] {
    need(dataset, "dataset");
    need(path, "path");
    pcgil::data::save_dataset(dataset->data, path);
  });
}

pcgil_status pcgil_dataset_stats(const pcgil_dataset* dataset, pcgil_buffer_stats* out) {
  return guarded([&] {
    need(dataset, "dataset");
    need(out, "out");
    const pcgil::data::BufferStats s = pcgil::data::compute_stats(dataset->data);
    out->n_levels = s.n_levels;
    out->mean_traj_per_level = s.mean_traj_per_level;
    out->mean_exp_per_traj = s.mean_exp_per_traj;
    out->mean_return = s.mean_return;
    out->n_trajectories = s.n_trajectories;
    out->n_tuples = s.n_tuples;
  });
}

pcgil_status pcgil_dataset_subset(const pcgil_dataset* dataset, size_t n_levels,
                                  const char* selection, const pcgil_dataset* other,
                                  const uint64_t* seeds, size_t n_seeds, pcgil_dataset** out) {
  return guarded([&] {
    need(dataset, "dataset");
    need(out, "out");
    *out = nullptr;
    pcgil::data::SubsetSelection sel;
    const std::string mode = selection ? selection : "first_n";
    if (mode == "first_n") {
      sel.mode = pcgil::data::SubsetMode::kFirstN;
    } else if (mode == "common_with") {
      need(other, "other");
      sel.mode = pcgil::data::SubsetMode::kCommonWith;
      sel.other = &other->data;
    } else if (mode == "explicit") {
      pcgil::require(seeds != nullptr || n_seeds == 0, pcgil::ErrorCode::kInvalidArgument,
                     "seeds must not be null");
      sel.mode = pcgil::data::SubsetMode::kExplicit;
      sel.level_seeds.assign(seeds, seeds + n_seeds);
    } else {
      pcgil::fail(pcgil::ErrorCode::kInvalidArgument, "unknown selection '" + mode + "'");
    }
    auto ds = std::make_unique<pcgil_dataset>();
    ds->data = pcgil::data::select_subset(dataset->data, n_levels, sel);
    *out = ds.release();
  });
}

pcgil_status pcgil_dataset_histogram_csv(const pcgil_dataset* dataset, int bins, const char* path) {
  return guarded([&] {
    need(dataset, "dataset");
    need(path, "path");
    const pcgil::data::Histogram h = pcgil::data::step_distribution(dataset->data, bins);
    std::ofstream out(path);
    pcgil::require(static_cast<bool>(out), pcgil::ErrorCode::kIo,
                   std::string("cannot write ") + path);
    pcgil::data::write_histogram_csv(h, out);
  });
}

pcgil_status pcgil_config_resolve(const char* config_json, char** resolved_json) {
  return guarded([&] { emit(resolved_json, hn::to_json(parse_config(config_json))); });
}

pcgil_status pcgil_collect(const char* config_json, const char* out_dir, char** result_json) {
  return guarded([&] {
    need(out_dir, "out_dir");
    emit(result_json, hn::artifacts_to_json(hn::cmd_collect(parse_config(config_json), out_dir)));
  });
}

pcgil_status pcgil_train(const char* config_json, const char* out_root, int jobs,
                         char** result_json) {
  return guarded([&] {
    need(out_root, "out_root");
    json runs = json::array();
    for (const auto& a : hn::cmd_train(parse_config(config_json), out_root, jobs)) {
      runs.push_back(hn::artifacts_to_json(a));
    }
    emit(result_json, runs);
  });
}

pcgil_status pcgil_pretrain(const char* config_json, const char* out_dir, char** result_json) {
  return guarded([&] {
    need(out_dir, "out_dir");
    emit(result_json, hn::artifacts_to_json(hn::cmd_pretrain(parse_config(config_json), out_dir)));
  });
}

pcgil_status pcgil_eval(const char* request_json, char** result_json) {
  return guarded([&] {
    need(request_json, "request_json");
    const json j = json::parse(request_json);
    hn::EvalRequest r;
    r.actor = j.at("actor").get<std::string>();
    json cfg = {{"task", j.at("task")}};
    r.task = hn::config_from_json(cfg).effective_task();
    if (j.contains("levels")) {
      r.level_seeds = j.at("levels").get<std::vector<std::uint64_t>>();
    } else {
      const auto range = j.value("level_range", std::vector<std::uint64_t>{0, 100});
      pcgil::require(range.size() == 2, pcgil::ErrorCode::kInvalidArgument,
                     "level_range must be [first, count]");
      for (std::uint64_t s = 0; s < range[1]; ++s) r.level_seeds.push_back(range[0] + s);
    }
    r.episodes = j.value("episodes", 100);
    r.greedy = j.value("greedy", false);
    r.seed = j.value("seed", std::uint64_t{0});
    const pcgil::ppo::EvalResult e = hn::cmd_eval(r);
    emit(result_json, json{{"mean", e.mean}, {"std", e.std}, {"episodes", e.returns.size()}});
  });
}

pcgil_status pcgil_report(const char* const* run_dirs, size_t n_runs, const char* out_csv) {
  return guarded([&] {
    need(run_dirs, "run_dirs");
    need(out_csv, "out_csv");
    std::vector<hn::ReportInput> runs;
    for (size_t i = 0; i < n_runs; ++i) {
      need(run_dirs[i], "run_dirs[i]");
      runs.push_back(hn::load_run(run_dirs[i]));
    }
    const hn::Report report = hn::aggregate(runs);
    std::ofstream out(out_csv);
    pcgil::require(static_cast<bool>(out), pcgil::ErrorCode::kIo,
                   std::string("cannot write ") + out_csv);
    hn::write_report_csv(report, out);
  });
}

}  // extern "C"
