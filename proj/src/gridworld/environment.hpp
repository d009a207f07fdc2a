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
#ifndef PCGIL_GRIDWORLD_ENVIRONMENT_HPP_
#define PCGIL_GRIDWORLD_ENVIRONMENT_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "gridworld/grid.hpp"
#include "gridworld/level_spec.hpp"

namespace pcgil::gridworld {

enum class Action : std::uint8_t {
  kTurnLeft = 0,
  kTurnRight = 1,
  kForward = 2,
  kPickup = 3,
  kDrop = 4,
  kToggle = 5,
  kDone = 6,
};
inline constexpr int kNumActions = 7;

struct Carried {
  ObjectKind kind = ObjectKind::kEmpty;
  Colour colour = Colour::kRed;
  friend bool operator==(const Carried&, const Carried&) = default;
};

// A generated level: the initial grid and spawn pose.
struct Level {
  LevelSpec spec;
  Grid grid;
  Pos agent_pos;
  int agent_dir = 0;
  // KeyDoorBall: colour of the ball whose pickup ends the episode.
  Colour target_colour = Colour::kBlue;
  // Number of deterministic reseeds the generator needed.
  int generation_failures = 0;
};

struct EnvState {
  Grid grid;
  Pos agent_pos;
  int agent_dir = 0;
  std::optional<Carried> carrying;
  int step_count = 0;
  bool terminated = false;
  bool truncated = false;

  TaskFamily family = TaskFamily::kMultiRoom;
  int t_max = 1;
  int view_size = 7;
  Colour target_colour = Colour::kBlue;

  bool finished() const { return terminated || truncated; }
  friend bool operator==(const EnvState&, const EnvState&) = default;
};

// Egocentric partial view. Cell (col, row) of the view lives at
// view[(row * view_size + col) * 3 + channel]; the agent sits at column
// view_size / 2 of the bottom row, facing towards row 0.
struct Observation {
  int view_size = 7;
  std::vector<std::uint8_t> view;
  std::uint8_t direction = 0;

  std::uint8_t kind(int col, int row) const { return view[offset(col, row)]; }
  std::uint8_t colour(int col, int row) const { return view[offset(col, row) + 1]; }
  std::uint8_t state(int col, int row) const { return view[offset(col, row) + 2]; }
  std::size_t offset(int col, int row) const {
    return (static_cast<std::size_t>(row) * static_cast<std::size_t>(view_size) +
            static_cast<std::size_t>(col)) * 3;
  }

  // Stable over the raw view bytes plus direction.
  std::uint64_t hash() const;

  friend bool operator==(const Observation&, const Observation&) = default;
};

struct StepOutcome {
  Observation observation;
  double reward = 0.0;
  bool terminated = false;
  bool truncated = false;
};

// 1 - 0.9 * t / t_max for a success at step t < t_max, else 0.
double success_reward(int step, int t_max);

Level generate_level(const LevelSpec& spec);

std::pair<EnvState, Observation> reset(const Level& level);

// Advances one step. Throws Error(kContractViolation) on a finished episode.
StepOutcome step(EnvState& state, Action action);

// Transition without the observation; used by search.
void apply_action(EnvState& state, Action action, double* reward = nullptr);

Observation observe(const EnvState& state);

// Network input: ids divided by their enum cardinalities, flattened in view
// order, followed by a one-hot direction.
int encoded_size(int view_size);
void encode_observation(const Observation& obs, std::span<double> out);
std::vector<double> encode_observation(const Observation& obs);

}  // namespace pcgil::gridworld

#endif  // PCGIL_GRIDWORLD_ENVIRONMENT_HPP_
