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

#include "datasets/dataset.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "common/binary_io.hpp"
#include "common/error.hpp"

namespace pcgil::data {

namespace {

constexpr char kMagic[8] = {'P', 'C', 'G', 'I', 'L', 'D', 'S', '\0'};
constexpr std::uint32_t kVersion = 1;

void write_trajectory(std::ostream& out, const rapid::ScoredTrajectory& st) {
  const TrajectoryRecord& r = st.record;
  r.level.write_binary(out);
  io::write<double>(out, st.s_ext);
  io::write<double>(out, st.s_local);
  io::write<double>(out, st.s_global);
  io::write<double>(out, st.score);
  io::write<std::uint64_t>(out, st.age);
  io::write<std::uint8_t>(out, r.terminated ? 1 : 0);
  io::write<double>(out, r.episode_return);
  io::write<std::uint32_t>(out, static_cast<std::uint32_t>(r.length()));
  io::write<std::uint32_t>(out, static_cast<std::uint32_t>(r.level.view_size));
  for (int t = 0; t < r.length(); ++t) {
    const auto k = static_cast<std::size_t>(t);
    const auto& obs = r.observations[k];
    out.write(reinterpret_cast<const char*>(obs.view.data()),
              static_cast<std::streamsize>(obs.view.size()));
    io::write<std::uint8_t>(out, obs.direction);
    io::write<std::uint8_t>(out, static_cast<std::uint8_t>(r.actions[k]));
    io::write<double>(out, r.rewards[k]);
  }
}

rapid::ScoredTrajectory read_trajectory(std::istream& in) {
  rapid::ScoredTrajectory st;
  TrajectoryRecord& r = st.record;
  r.level = gridworld::LevelSpec::read_binary(in);
  st.s_ext = io::read<double>(in);
  st.s_local = io::read<double>(in);
  st.s_global = io::read<double>(in);
  st.score = io::read<double>(in);
  st.age = io::read<std::uint64_t>(in);
  r.terminated = io::read<std::uint8_t>(in) != 0;
  const double stored_return = io::read<double>(in);
  const auto length = io::read<std::uint32_t>(in);
  const auto view_size = io::read<std::uint32_t>(in);
  require(static_cast<int>(view_size) == r.level.view_size, ErrorCode::kFormat,
          "trajectory view size disagrees with its level record");
  require(length >= 1 && static_cast<int>(length) <= r.level.t_max, ErrorCode::kFormat,
          "trajectory length out of range");
  const std::size_t view_bytes = static_cast<std::size_t>(view_size * view_size * 3);
  for (std::uint32_t t = 0; t < length; ++t) {
    gridworld::Observation obs;
    obs.view_size = static_cast<int>(view_size);
    obs.view.resize(view_bytes);
    in.read(reinterpret_cast<char*>(obs.view.data()), static_cast<std::streamsize>(view_bytes));
    require(static_cast<bool>(in), ErrorCode::kFormat, "unexpected end of file");
    obs.direction = io::read<std::uint8_t>(in);
    const auto action = io::read<std::uint8_t>(in);
    require(action < gridworld::kNumActions, ErrorCode::kFormat, "action id out of range");
    const double reward = io::read<double>(in);
    r.push(std::move(obs), static_cast<gridworld::Action>(action), reward);
  }
  // Keep the stored sum bit-exact; validate() checks it against the rewards.
  r.episode_return = stored_return;
  r.validate();
  return st;
}

}  // namespace

void TrajectoryRecord::validate() const {
  require(!actions.empty(), ErrorCode::kFormat, "empty trajectory");
  require(observations.size() == actions.size() && rewards.size() == actions.size(),
          ErrorCode::kFormat, "trajectory columns have inconsistent lengths");
  require(length() <= level.t_max, ErrorCode::kFormat, "trajectory longer than t_max");
  double sum = 0.0;
  for (std::size_t i = 0; i < rewards.size(); ++i) {
    require(std::isfinite(rewards[i]) && rewards[i] >= 0.0 && rewards[i] <= 1.0,
            ErrorCode::kFormat, "reward out of range");
    if (rewards[i] > 0.0) {
      require(i + 1 == rewards.size() && terminated, ErrorCode::kFormat,
              "positive reward before the terminal step");
    }
    sum += rewards[i];
  }
  require(std::abs(sum - episode_return) <= 1e-12, ErrorCode::kFormat,
          "trajectory return does not equal the sum of its rewards");
  for (const auto& obs : observations) {
    require(obs.view_size == level.view_size &&
                obs.view.size() == static_cast<std::size_t>(obs.view_size * obs.view_size * 3) &&
                obs.direction < 4,
            ErrorCode::kFormat, "malformed observation");
    for (std::size_t i = 0; i < obs.view.size(); i += 3) {
      require(obs.view[i] < gridworld::kNumObjectKinds && obs.view[i + 1] < gridworld::kNumColours &&
                  obs.view[i + 2] < gridworld::kNumCellStates,
              ErrorCode::kFormat, "observation id out of range");
    }
  }
}

std::size_t Dataset::tuple_count() const {
  std::size_t n = 0;
  for (const auto& t : trajectories) n += static_cast<std::size_t>(t.record.length());
  return n;
}

Dataset snapshot(const rapid::RankedBuffer& buffer, const gridworld::LevelSpec& task,
                 std::string tag, const rapid::RapidWeights& weights) {
  Dataset d;
  d.task = task.with_seed(0);
  d.tag = std::move(tag);
  d.weights = weights;
  d.trajectories = buffer.trajectories();
  return d;
}

rapid::RankedBuffer to_buffer(const Dataset& dataset, std::size_t capacity) {
  const std::size_t tuples = dataset.tuple_count();
  if (capacity == 0) capacity = std::max(rapid::kDefaultCapacityTuples, tuples);
  rapid::RankedBuffer buffer(capacity);
  for (const auto& t : dataset.trajectories) buffer.insert(t);
  return buffer;
}

BufferStats compute_stats(const Dataset& dataset) {
  require(!dataset.trajectories.empty(), ErrorCode::kInsufficientData,
          "statistics of an empty dataset");
  std::vector<std::uint64_t> seeds;
  double sum_return = 0.0;
  std::size_t tuples = 0;
  for (const auto& t : dataset.trajectories) {
    seeds.push_back(t.record.level.seed);
    sum_return += t.record.episode_return;
    tuples += static_cast<std::size_t>(t.record.length());
  }
  std::sort(seeds.begin(), seeds.end());
  const auto distinct = static_cast<std::size_t>(std::unique(seeds.begin(), seeds.end()) - seeds.begin());
  BufferStats s;
  s.n_trajectories = dataset.trajectories.size();
  s.n_tuples = tuples;
  s.n_levels = distinct;
  s.mean_traj_per_level = static_cast<double>(s.n_trajectories) / static_cast<double>(distinct);
  s.mean_exp_per_traj = static_cast<double>(tuples) / static_cast<double>(s.n_trajectories);
  s.mean_return = sum_return / static_cast<double>(s.n_trajectories);
  return s;
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& path) {
  const BufferStats stats = compute_stats(dataset);
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(out), ErrorCode::kIo, "cannot open " + path.string() + " for writing");
    out.write(kMagic, sizeof(kMagic));
    io::write<std::uint32_t>(out, kVersion);
    dataset.task.write_binary(out);
    io::write_string(out, dataset.tag);
    io::write<double>(out, dataset.weights.w0);
    io::write<double>(out, dataset.weights.w1);
    io::write<double>(out, dataset.weights.w2);
    io::write<std::uint64_t>(out, stats.n_levels);
    io::write<double>(out, stats.mean_traj_per_level);
    io::write<double>(out, stats.mean_exp_per_traj);
    io::write<double>(out, stats.mean_return);
    io::write<std::uint64_t>(out, stats.n_trajectories);
    io::write<std::uint64_t>(out, stats.n_tuples);
    io::write<std::uint64_t>(out, dataset.trajectories.size());
    for (const auto& t : dataset.trajectories) write_trajectory(out, t);
    require(static_cast<bool>(out), ErrorCode::kIo, "write failed for " + path.string());
  }
  std::ofstream idx(path.string() + ".idx", std::ios::trunc);
  require(static_cast<bool>(idx), ErrorCode::kIo, "cannot write dataset index for " + path.string());
  write_index(dataset, idx);
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::kIo, "cannot open " + path.string());
  io::expect_magic(in, kMagic, sizeof(kMagic));
  require(io::read<std::uint32_t>(in) == kVersion, ErrorCode::kFormat,
          "unsupported dataset version");
  Dataset d;
  d.task = gridworld::LevelSpec::read_binary(in);
  d.tag = io::read_string(in, 256);
  d.weights.w0 = io::read<double>(in);
  d.weights.w1 = io::read<double>(in);
  d.weights.w2 = io::read<double>(in);
  BufferStats stored;
  stored.n_levels = io::read<std::uint64_t>(in);
  stored.mean_traj_per_level = io::read<double>(in);
  stored.mean_exp_per_traj = io::read<double>(in);
  stored.mean_return = io::read<double>(in);
  stored.n_trajectories = io::read<std::uint64_t>(in);
  stored.n_tuples = io::read<std::uint64_t>(in);
  const auto n = io::read<std::uint64_t>(in);
  require(n == stored.n_trajectories && n <= (1u << 24), ErrorCode::kFormat,
          "trajectory count disagrees with header");
  d.trajectories.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    d.trajectories.push_back(read_trajectory(in));
    require(d.trajectories.back().record.level.same_task(d.task), ErrorCode::kFormat,
            "trajectory belongs to a different task");
  }
  require(in.peek() == std::char_traits<char>::eof(), ErrorCode::kFormat,
          "trailing bytes after dataset");
  require(compute_stats(d) == stored, ErrorCode::kFormat,
          "stored dataset statistics do not match its contents");
  return d;
}

void write_index(const Dataset& dataset, std::ostream& out) {
  const BufferStats s = compute_stats(dataset);
  out << "# pcgil dataset index v1\n";
  out << "task: " << dataset.task.to_text() << "\n";
  out << "tag: " << dataset.tag << "\n";
  out << std::setprecision(17);
  out << "weights: " << dataset.weights.w0 << " " << dataset.weights.w1 << " "
      << dataset.weights.w2 << "\n";
  out << "stats: n_levels=" << s.n_levels << " mean_traj_per_level=" << s.mean_traj_per_level
      << " mean_exp_per_traj=" << s.mean_exp_per_traj << " mean_return=" << s.mean_return
      << " n_trajectories=" << s.n_trajectories << " n_tuples=" << s.n_tuples << "\n";
  out << "rank,seed,length,return,score,s_ext,s_local,s_global,age\n";
  for (std::size_t i = 0; i < dataset.trajectories.size(); ++i) {
    const auto& t = dataset.trajectories[i];
    out << i << "," << t.record.level.seed << "," << t.record.length() << ","
        << t.record.episode_return << "," << t.score << "," << t.s_ext << "," << t.s_local << ","
        << t.s_global << "," << t.age << "\n";
  }
}

}  // namespace pcgil::data
