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
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "common/error.hpp"
#include "datasets/dataset.hpp"
#include "doctest.h"
#include "harness/config.hpp"
#include "harness/metrics.hpp"
#include "harness/report.hpp"
#include "harness/runner.hpp"
#include "test_support.hpp"

using namespace pcgil;
using namespace pcgil::harness;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "pcgil_unit" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string file_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

ExperimentConfig small_config(Mode mode, std::int64_t steps) {
  ExperimentConfig c;
  c.mode = mode;
  c.total_env_steps = steps;
  c.network.hidden = 16;
  c.num_train_levels = 20;
  c.il.pretrain_updates = 10;
  c.eval.episodes = 5;
  c.seeds = {0};
  return c;
}

const fs::path& demo_dataset() {
  static const fs::path path = [] {
    const gridworld::LevelSpec task = gridworld::multi_room_spec(2, 4, 40);
    std::vector<data::TrajectoryRecord> demos;
    for (std::uint64_t s = 0; s < 5; ++s) demos.push_back(testing::optimal_demonstration(task.with_seed(s)));
    const fs::path p = scratch("demo") / "demo.pcgds";
    data::save_dataset(testing::demonstration_dataset(task, demos), p);
    return p;
  }();
  return path;
}

}  // namespace

TEST_CASE("config json") {
  SUBCASE("round trip") {
    ExperimentConfig c;
    c.mode = Mode::kPretrainPlusConcurrent;
    c.dataset_path = "x.pcgds";
    c.task = gridworld::mn7s8();
    c.seeds = {4, 5};
    c.t_max_override = 300;
    c.subset = SubsetConfig{3, data::SubsetMode::kExplicit, "", {1, 2, 3}};
    c.checkpoint_thresholds = {0.1, 0.2};
    const nlohmann::json j = to_json(c);
    CHECK(to_json(config_from_json(j)) == j);
  }
  SUBCASE("missing keys take defaults") {
    const ExperimentConfig c = config_from_json(nlohmann::json::object());
    CHECK(to_json(c) == to_json(ExperimentConfig{}));
    CHECK(c.seeds == std::vector<std::uint64_t>{0, 1, 2});
    CHECK(c.il.pretrain_updates == 3000);
    CHECK(c.capacity_tuples == 10000);
  }
  SUBCASE("multi-room t_max defaults to twenty steps per room") {
    const auto j = nlohmann::json::parse(R"({"task": {"family": "MultiRoom", "num_rooms": 5}})");
    CHECK(config_from_json(j).task.t_max == 100);
  }
  SUBCASE("unknown keys are rejected") {
    CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"learning_rate": 1})")), Error);
    CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"ppo": {"lr": 1}})")), Error);
    CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"mode": "bc"})")), Error);
  }
  SUBCASE("mode requirements") {
    for (Mode m : {Mode::kPretrainThenRl, Mode::kPretrainPlusConcurrent, Mode::kPureIl, Mode::kConcurrent}) {
      ExperimentConfig c;
      c.mode = m;
      CHECK_THROWS_AS(c.validate(), Error);
      c.dataset_path = "d.pcgds";
      CHECK_NOTHROW(c.validate());
    }
    ExperimentConfig c;
    CHECK_NOTHROW(c.validate());
    c.seeds.clear();
    CHECK_THROWS_AS(c.validate(), Error);
  }
  SUBCASE("mode names") {
    for (Mode m : {Mode::kPureRl, Mode::kRapidSelfImitation, Mode::kPretrainThenRl, Mode::kConcurrent,
                   Mode::kPretrainPlusConcurrent, Mode::kPureIl}) {
      CHECK(parse_mode(mode_name(m)) == m);
    }
  }
  SUBCASE("t_max override") {
    ExperimentConfig c;
    c.task = gridworld::mn12s10();
    c.t_max_override = 480;
    CHECK(c.effective_task().t_max == 480);
  }
}

TEST_CASE("metrics csv") {
  const fs::path p = scratch("metrics") / "m.csv";
  {
    MetricsWriter w(p);
    w.write(MetricsRow{2048, 1, 0.25, 0.1, -0.01, 0.5, 1.9, 0.05, std::nullopt});
    w.write(MetricsRow{4096, 2, 1.0 / 3.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.7});
  }
  const std::string text = file_bytes(p);
  CHECK(text.substr(0, text.find('\n')) == kMetricsHeader);
  CHECK(text.find("2048,1,0.25,0.1,-0.01,0.5,1.9,0.05,\n") != std::string::npos);
  const auto rows = read_metrics_csv(p);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1].mean_return_100 == 1.0 / 3.0);
  CHECK_FALSE(rows[0].bc_loss.has_value());
  CHECK(rows[1].bc_loss == 0.7);

  RollingReturns r(3);
  for (double v : {1.0, 2.0, 3.0, 4.0}) r.push(v);
  CHECK(r.full());
  CHECK(r.mean() == 3.0);
  CHECK(r.std() == doctest::Approx(std::sqrt(2.0 / 3.0)));
}

TEST_CASE("report aggregation") {
  const std::string task = gridworld::multi_room_spec(2, 4, 40).to_text();
  const ReportInput a{"pure_rl", task, {2048, 4096}, {0.2, 0.4}};
  SUBCASE("identical runs have zero spread") {
    const Report r = aggregate({a, a, a});
    for (const auto& [step, cells] : r.rows) {
      CHECK(cells.at("pure_rl").std == 0.0);
      CHECK(cells.at("pure_rl").runs == 3);
    }
  }
  SUBCASE("hand computed") {
    const ReportInput b{"pure_rl", task, {2048, 4096, 6144}, {0.4, 0.8, 0.9}};
    const ReportInput c{"concurrent", task, {2048}, {0.5}};
    const Report r = aggregate({a, b, c});
    CHECK(r.modes == std::vector<std::string>{"pure_rl", "concurrent"});
    CHECK(r.rows.at(2048).at("pure_rl").mean == doctest::Approx(0.3));
    CHECK(r.rows.at(2048).at("pure_rl").std == doctest::Approx(0.1));
    CHECK(r.rows.at(4096).at("pure_rl").mean == doctest::Approx(0.6));
    CHECK(r.rows.count(6144) == 0);
    std::ostringstream out;
    write_report_csv(r, out);
    std::istringstream lines(out.str());
    std::string header, first, second;
    std::getline(lines, header);
    std::getline(lines, first);
    std::getline(lines, second);
    CHECK(header == "env_steps,pure_rl_mean,pure_rl_std,pure_rl_n,concurrent_mean,concurrent_std,concurrent_n");
    CHECK(first.rfind("2048,", 0) == 0);
    CHECK(second.substr(second.size() - 3) == ",,,");
  }
  SUBCASE("mismatched tasks") {
    const ReportInput b{"pure_rl", gridworld::multi_room_spec(3, 5, 60).to_text(), {2048}, {0.1}};
    CHECK_THROWS_AS(aggregate({a, b}), Error);
  }
}

TEST_CASE("runs") {
  SUBCASE("pure_rl") {
    const ExperimentConfig c = small_config(Mode::kPureRl, 3 * 2048);
    const RunArtifacts r = run_single(c, 0, scratch("pure_rl"));
    CHECK(r.updates == 3);
    CHECK(r.env_steps == 3 * 2048);
    CHECK(r.il_updates == 0);
    CHECK(r.bc_evaluations == 0);
    CHECK(r.ppo_optimizer_steps == 3 * 4 * 4);
    const auto rows = read_metrics_csv(r.metrics_csv);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].env_steps == 2048);
    CHECK(rows[2].env_steps == 6144);
    CHECK_FALSE(rows[0].bc_loss.has_value());
    CHECK(fs::exists(r.actor));
    CHECK(fs::exists(r.critic));
    CHECK(fs::exists(r.summary));
    const auto resolved = nlohmann::json::parse(file_bytes(r.resolved_config));
    CHECK(to_json(config_from_json(resolved)) == resolved);
  }
  SUBCASE("concurrent runs one il_update per ppo update") {
    ExperimentConfig c = small_config(Mode::kConcurrent, 4 * 2048);
    c.dataset_path = demo_dataset().string();
    const RunArtifacts r = run_single(c, 1, scratch("concurrent"));
    CHECK(r.updates == 4);
    CHECK(r.il_updates == 4);
    CHECK(r.il_optimizer_steps == 20);
    CHECK(r.bc_evaluations == 20);
    for (const auto& row : read_metrics_csv(r.metrics_csv)) CHECK(row.bc_loss.has_value());
  }
  SUBCASE("pretrain_then_rl counts env steps from zero after pretraining") {
    ExperimentConfig c = small_config(Mode::kPretrainThenRl, 2 * 2048);
    c.dataset_path = demo_dataset().string();
    const RunArtifacts r = run_single(c, 2, scratch("pretrain_then_rl"));
    CHECK(r.il_updates == 10);
    CHECK(r.pretrain_eval.has_value());
    REQUIRE(r.pretrain_log.has_value());
    CHECK(read_metrics_csv(r.metrics_csv).front().env_steps == 2048);
    std::ifstream log(*r.pretrain_log);
    std::string header;
    std::getline(log, header);
    CHECK(header == kPretrainHeader);
  }
  SUBCASE("pure_il never touches the environment") {
    ExperimentConfig c = small_config(Mode::kPureIl, 1'000'000);
    c.dataset_path = demo_dataset().string();
    const RunArtifacts r = run_single(c, 0, scratch("pure_il"));
    CHECK(r.env_steps == 0);
    CHECK(r.episodes == 0);
    CHECK(r.ppo_optimizer_steps == 0);
    CHECK(r.il_updates == 10);
    CHECK(r.final_return == r.pretrain_eval->mean);
    const auto rows = read_metrics_csv(r.metrics_csv);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].env_steps == 0);
  }
  SUBCASE("identical config and seed give identical metrics") {
    ExperimentConfig c = small_config(Mode::kPretrainPlusConcurrent, 3 * 2048);
    c.dataset_path = demo_dataset().string();
    const RunArtifacts a = run_single(c, 7, scratch("det_a"));
    const RunArtifacts b = run_single(c, 7, scratch("det_b"));
    CHECK(file_bytes(a.metrics_csv) == file_bytes(b.metrics_csv));
    CHECK(file_bytes(a.actor) == file_bytes(b.actor));
    const RunArtifacts other = run_single(c, 8, scratch("det_c"));
    CHECK(file_bytes(a.metrics_csv) != file_bytes(other.metrics_csv));
  }
  SUBCASE("collect with no budget warns and writes no datasets") {
    ExperimentConfig c = small_config(Mode::kRapidSelfImitation, 0);
    const RunArtifacts r = cmd_collect(c, scratch("collect0"));
    CHECK(r.datasets.empty());
    CHECK(r.warnings.size() == 3);
  }
  SUBCASE("t_max override lets episodes run longer") {
    ExperimentConfig c = small_config(Mode::kPureRl, 2 * 2048);
    c.task = gridworld::mn12s10();
    c.t_max_override = 480;
    const RunArtifacts r = run_single(c, 0, scratch("override"));
    CHECK(r.episodes <= 4096 / 240);
    const ReportInput in = load_run(r.dir);
    CHECK(in.task.find("t_max=480") != std::string::npos);
  }
  SUBCASE("missing dataset fails with a record") {
    ExperimentConfig c = small_config(Mode::kPretrainThenRl, 2048);
    c.dataset_path = "/nonexistent/d.pcgds";
    const fs::path dir = scratch("missing");
    CHECK_THROWS_AS(run_single(c, 0, dir), Error);
    CHECK(fs::exists(dir / "failure.json"));
  }
  SUBCASE("cmd_train lays out one directory per seed") {
    ExperimentConfig c = small_config(Mode::kPureRl, 2048);
    c.seeds = {3, 4};
    const fs::path root = scratch("train");
    const auto runs = cmd_train(c, root, 2);
    REQUIRE(runs.size() == 2);
    CHECK(fs::exists(root / "pure_rl_seed3" / "metrics.csv"));
    CHECK(fs::exists(root / "pure_rl_seed4" / "metrics.csv"));
  }
}
