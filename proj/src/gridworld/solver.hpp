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
#ifndef PCGIL_GRIDWORLD_SOLVER_HPP_
#define PCGIL_GRIDWORLD_SOLVER_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "gridworld/environment.hpp"

namespace pcgil::gridworld {

inline constexpr std::size_t kDefaultNodeBudget = 4'000'000;

struct Solution {
  std::vector<Action> actions;
  std::size_t expanded = 0;
};

// Breadth-first search over (position, direction, carried object, object and
// door layout), ignoring the step limit. Returns the shortest action sequence
// reaching the terminal condition, or nullopt when none exists. Throws
// Error(kBudgetExceeded) once more than node_budget states were expanded.
std::optional<Solution> shortest_solution(const Level& level,
                                          std::size_t node_budget = kDefaultNodeBudget);
std::optional<Solution> shortest_solution(const EnvState& start,
                                          std::size_t node_budget = kDefaultNodeBudget);

bool check_solvable(const Level& level, std::size_t node_budget = kDefaultNodeBudget);

}  // namespace pcgil::gridworld

#endif  // PCGIL_GRIDWORLD_SOLVER_HPP_
