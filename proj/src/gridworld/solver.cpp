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
#include "gridworld/solver.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <string>
#include <unordered_map>

#include "common/error.hpp"

namespace pcgil::gridworld {

namespace {

constexpr Action kSearchActions[] = {Action::kTurnLeft, Action::kTurnRight, Action::kForward,
                                     Action::kPickup,   Action::kDrop,      Action::kToggle};

class StateKeyEncoder {
 public:
  explicit StateKeyEncoder(const Grid& grid) {
    for (std::size_t i = 0; i < grid.cells().size(); ++i) {
      const ObjectKind k = grid.cells()[i].kind;
      if (k != ObjectKind::kWall && k != ObjectKind::kGoal) mutable_cells_.push_back(i);
    }
  }

  std::string encode(const EnvState& s) const {
    std::string key;
    key.reserve(8 + 5 * 8);
    key.push_back(static_cast<char>(s.agent_pos.x));
    key.push_back(static_cast<char>(s.agent_pos.y));
    key.push_back(static_cast<char>(s.agent_dir));
    key.push_back(static_cast<char>(s.carrying ? static_cast<int>(s.carrying->kind) : 0));
    key.push_back(static_cast<char>(s.carrying ? static_cast<int>(s.carrying->colour) : 0));
    for (std::size_t i : mutable_cells_) {
      const Cell& c = s.grid.cells()[i];
      if (c.kind == ObjectKind::kEmpty) continue;
      key.push_back(static_cast<char>(i & 0xff));
      key.push_back(static_cast<char>(i >> 8));
      key.push_back(static_cast<char>(c.kind));
      key.push_back(static_cast<char>(c.colour));
      key.push_back(static_cast<char>(c.state));
    }
    return key;
  }

 private:
  std::vector<std::size_t> mutable_cells_;
};

bool useless(const EnvState& s, Action a) {
  if (a != Action::kToggle) return false;
  const Pos front = s.agent_pos + kDirVec[s.agent_dir];
  if (!s.grid.in_bounds(front)) return true;
  const Cell& c = s.grid.at(front);
  // Closing an open door never shortens a path.
  return c.kind != ObjectKind::kBox && !(c.kind == ObjectKind::kDoor && c.state != CellState::kOpen);
}

}  // namespace

std::optional<Solution> shortest_solution(const EnvState& start, std::size_t node_budget) {
  require(!start.finished(), ErrorCode::kInvalidArgument, "search from a finished state");
  EnvState root = start;
  root.step_count = 0;
  root.t_max = std::numeric_limits<int>::max();

  const StateKeyEncoder encoder(root.grid);
  std::vector<std::size_t> parents;
  std::vector<Action> via;
  std::unordered_map<std::string, std::size_t> seen;
  std::deque<std::pair<EnvState, std::size_t>> frontier;

  seen.emplace(encoder.encode(root), 0);
  parents.push_back(0);
  via.push_back(Action::kDone);
  frontier.emplace_back(root, 0);

  std::size_t expanded = 0;
  while (!frontier.empty()) {
    auto [state, index] = std::move(frontier.front());
    frontier.pop_front();
    if (++expanded > node_budget)
      fail(ErrorCode::kBudgetExceeded,
           "solvability search exceeded node budget of " + std::to_string(node_budget));
    for (Action a : kSearchActions) {
      if (useless(state, a)) continue;
      EnvState next = state;
      apply_action(next, a);
      std::string key = encoder.encode(next);
      if (!next.terminated && seen.contains(key)) continue;
      const std::size_t child = parents.size();
      parents.push_back(index);
      via.push_back(a);
      if (next.terminated) {
        Solution sol;
        sol.expanded = expanded;
        for (std::size_t n = child; n != 0; n = parents[n]) sol.actions.push_back(via[n]);
        std::reverse(sol.actions.begin(), sol.actions.end());
        return sol;
      }
      seen.emplace(std::move(key), child);
      next.step_count = 0;
      frontier.emplace_back(std::move(next), child);
    }
  }
  return std::nullopt;
}

std::optional<Solution> shortest_solution(const Level& level, std::size_t node_budget) {
  return shortest_solution(reset(level).first, node_budget);
}

bool check_solvable(const Level& level, std::size_t node_budget) {
  return shortest_solution(level, node_budget).has_value();
}

}  // namespace pcgil::gridworld
