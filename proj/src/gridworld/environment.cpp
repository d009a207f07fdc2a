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
#include "gridworld/environment.hpp"

#include <cstdlib>

#include "common/error.hpp"
#include "common/hash.hpp"

namespace pcgil::gridworld {

double success_reward(int step, int t_max) {
  if (step >= t_max) return 0.0;
  return 1.0 - 0.9 * static_cast<double>(step) / static_cast<double>(t_max);
}

std::uint64_t Observation::hash() const {
  const std::uint64_t h = fnv1a(view);
  const std::uint8_t dir[1] = {direction};
  return fnv1a(dir, h);
}

std::pair<EnvState, Observation> reset(const Level& level) {
  EnvState state;
  state.grid = level.grid;
  state.agent_pos = level.agent_pos;
  state.agent_dir = level.agent_dir;
  state.family = level.spec.family;
  state.t_max = level.spec.t_max;
  state.view_size = level.spec.view_size;
  state.target_colour = level.target_colour;
  Observation obs = observe(state);
  return {std::move(state), std::move(obs)};
}

void apply_action(EnvState& state, Action action, double* reward) {
  require(!state.finished(), ErrorCode::kContractViolation,
          "step called on a finished episode");
  ++state.step_count;
  bool success = false;

  const Pos front = state.agent_pos + kDirVec[state.agent_dir];
  const bool front_ok = state.grid.in_bounds(front);

  switch (action) {
    case Action::kTurnLeft:
      state.agent_dir = (state.agent_dir + 3) % 4;
      break;
    case Action::kTurnRight:
      state.agent_dir = (state.agent_dir + 1) % 4;
      break;
    case Action::kForward:
      if (front_ok && state.grid.at(front).walkable()) {
        state.agent_pos = front;
        if (state.family == TaskFamily::kMultiRoom &&
            state.grid.at(front).kind == ObjectKind::kGoal)
          success = true;
      }
      break;
    case Action::kPickup:
      if (front_ok && !state.carrying && state.grid.at(front).carriable()) {
        Cell& cell = state.grid.at(front);
        state.carrying = Carried{cell.kind, cell.colour};
        if (state.family == TaskFamily::kKeyDoorBall && cell.kind == ObjectKind::kBall &&
            cell.colour == state.target_colour)
          success = true;
        cell = Cell::empty();
      }
      break;
    case Action::kDrop:
      if (front_ok && state.carrying && state.grid.at(front).kind == ObjectKind::kEmpty) {
        state.grid.at(front) = Cell{state.carrying->kind, state.carrying->colour, CellState::kNone};
        state.carrying.reset();
      }
      break;
    case Action::kToggle:
      if (front_ok) {
        Cell& cell = state.grid.at(front);
        if (cell.kind == ObjectKind::kDoor) {
          if (cell.state == CellState::kLocked) {
            if (state.carrying && state.carrying->kind == ObjectKind::kKey &&
                state.carrying->colour == cell.colour)
              cell.state = CellState::kOpen;
          } else {
            cell.state = cell.state == CellState::kOpen ? CellState::kClosed : CellState::kOpen;
          }
        } else if (cell.kind == ObjectKind::kBox) {
          cell = cell.inner == ObjectKind::kEmpty ? Cell::empty()
                                                  : Cell{cell.inner, cell.inner_colour, CellState::kNone};
        }
      }
      break;
    case Action::kDone:
      break;
  }

  double r = 0.0;
  if (success && state.step_count < state.t_max) {
    state.terminated = true;
    r = success_reward(state.step_count, state.t_max);
  } else if (state.step_count >= state.t_max) {
    state.truncated = true;
  }
  if (reward) *reward = r;
}

StepOutcome step(EnvState& state, Action action) {
  StepOutcome out;
  apply_action(state, action, &out.reward);
  out.terminated = state.terminated;
  out.truncated = state.truncated;
  out.observation = observe(state);
  return out;
}

namespace {

// True if no opaque cell lies strictly between the agent and the target on
// the Bresenham line joining them (view-local coordinates).
bool line_of_sight(const std::vector<std::uint8_t>& opaque, int vs, int col, int row) {
  int x0 = vs / 2;
  int y0 = vs - 1;
  const int dx = std::abs(col - x0);
  const int dy = -std::abs(row - y0);
  const int sx = x0 < col ? 1 : -1;
  const int sy = y0 < row ? 1 : -1;
  int err = dx + dy;
  while (true) {
    if (x0 == col && y0 == row) return true;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y0 += sy;
    }
    if (x0 == col && y0 == row) return true;
    if (opaque[static_cast<std::size_t>(y0 * vs + x0)]) return false;
  }
}

}  // namespace

Observation observe(const EnvState& state) {
  const int vs = state.view_size;
  Observation obs;
  obs.view_size = vs;
  obs.direction = static_cast<std::uint8_t>(state.agent_dir);
  obs.view.assign(static_cast<std::size_t>(vs * vs * 3), 0);

  const Pos forward = kDirVec[state.agent_dir];
  const Pos right = kDirVec[(state.agent_dir + 1) % 4];
  std::vector<Cell> cells(static_cast<std::size_t>(vs * vs));
  std::vector<std::uint8_t> opaque(cells.size(), 0);
  for (int row = 0; row < vs; ++row) {
    for (int col = 0; col < vs; ++col) {
      const int fwd = vs - 1 - row;
      const int lat = col - vs / 2;
      const Pos world{state.agent_pos.x + forward.x * fwd + right.x * lat,
                      state.agent_pos.y + forward.y * fwd + right.y * lat};
      const auto i = static_cast<std::size_t>(row * vs + col);
      cells[i] = state.grid.get(world);
      opaque[i] = cells[i].opaque() ? 1 : 0;
    }
  }
  // The agent's own cell shows what it carries.
  const auto agent_index = static_cast<std::size_t>((vs - 1) * vs + vs / 2);
  cells[agent_index] = state.carrying
                           ? Cell{state.carrying->kind, state.carrying->colour, CellState::kNone}
                           : Cell::empty();
  opaque[agent_index] = 0;

  for (int row = 0; row < vs; ++row) {
    for (int col = 0; col < vs; ++col) {
      if (!line_of_sight(opaque, vs, col, row)) continue;  // stays kUnseen
      const Cell& c = cells[static_cast<std::size_t>(row * vs + col)];
      const std::size_t o = obs.offset(col, row);
      obs.view[o] = static_cast<std::uint8_t>(c.kind);
      obs.view[o + 1] = static_cast<std::uint8_t>(c.colour);
      obs.view[o + 2] = static_cast<std::uint8_t>(c.state);
    }
  }
  return obs;
}

int encoded_size(int view_size) { return view_size * view_size * 3 + 4; }

void encode_observation(const Observation& obs, std::span<double> out) {
  const std::size_t n = obs.view.size();
  require(out.size() == n + 4, ErrorCode::kInvalidArgument, "encode buffer has wrong size");
  static constexpr double kScale[3] = {1.0 / kNumObjectKinds, 1.0 / kNumColours,
                                       1.0 / kNumCellStates};
  for (std::size_t i = 0; i < n; ++i) out[i] = obs.view[i] * kScale[i % 3];
  for (std::size_t d = 0; d < 4; ++d) out[n + d] = d == obs.direction ? 1.0 : 0.0;
}

std::vector<double> encode_observation(const Observation& obs) {
  std::vector<double> out(obs.view.size() + 4);
  encode_observation(obs, out);
  return out;
}

}  // namespace pcgil::gridworld
