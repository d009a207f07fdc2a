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
#include <array>
#include <vector>

#include "common/error.hpp"
#include "common/rng.hpp"
#include "gridworld/environment.hpp"

namespace pcgil::gridworld {

namespace {

constexpr std::uint64_t kLevelStream = 0x1e7e1;
constexpr std::uint64_t kReseedMask = 0xA5A5'5A5A'C3C3'3C3CULL;
constexpr int kMaxReseeds = 8;
constexpr int kMultiRoomGridSize = 25;
constexpr int kMultiRoomAttempts = 256;

struct Room {
  Pos top;
  Pos size;
  Pos entry_door;
};

bool rects_intersect(const Room& a, Pos top, Pos size) {
  return top.x < a.top.x + a.size.x && a.top.x < top.x + size.x &&
         top.y < a.top.y + a.size.y && a.top.y < top.y + size.y;
}

// Random-walk room placement: each new room is attached through a door on a
// wall of the previous room other than the one it was entered from.
// Walls: 0 = right, 1 = bottom, 2 = left, 3 = top.
bool place_room(Rng& rng, int num_left, std::vector<Room>& rooms, int min_size, int max_size,
                int entry_wall, Pos entry_door, int grid_size) {
  const int size_x = rng.range(min_size, max_size + 1);
  const int size_y = rng.range(min_size, max_size + 1);

  Pos top;
  if (rooms.empty()) {
    top = entry_door;
  } else if (entry_wall == 0) {
    top.x = entry_door.x - size_x + 1;
    top.y = rng.range(entry_door.y - size_y + 2, entry_door.y);
  } else if (entry_wall == 1) {
    top.x = rng.range(entry_door.x - size_x + 2, entry_door.x);
    top.y = entry_door.y - size_y + 1;
  } else if (entry_wall == 2) {
    top.x = entry_door.x;
    top.y = rng.range(entry_door.y - size_y + 2, entry_door.y);
  } else {
    top.x = rng.range(entry_door.x - size_x + 2, entry_door.x);
    top.y = entry_door.y;
  }

  if (top.x < 0 || top.y < 0) return false;
  if (top.x + size_x > grid_size || top.y + size_y > grid_size) return false;

  // The previous room shares the door wall by construction.
  const std::size_t others = rooms.empty() ? 0 : rooms.size() - 1;
  for (std::size_t i = 0; i < others; ++i) {
    if (rects_intersect(rooms[i], top, {size_x, size_y})) return false;
  }

  rooms.push_back({top, {size_x, size_y}, entry_door});
  if (num_left == 1) return true;

  for (int attempt = 0; attempt < 8; ++attempt) {
    std::array<int, 3> walls{};
    int n = 0;
    for (int w = 0; w < 4; ++w) {
      if (w != entry_wall) walls[n++] = w;
    }
    const int exit_wall = walls[rng.below(3)];
    const int next_entry_wall = (exit_wall + 2) % 4;

    Pos exit_door;
    if (exit_wall == 0) {
      exit_door = {top.x + size_x - 1, top.y + rng.range(1, size_y - 1)};
    } else if (exit_wall == 1) {
      exit_door = {top.x + rng.range(1, size_x - 1), top.y + size_y - 1};
    } else if (exit_wall == 2) {
      exit_door = {top.x, top.y + rng.range(1, size_y - 1)};
    } else {
      exit_door = {top.x + rng.range(1, size_x - 1), top.y};
    }

    if (place_room(rng, num_left - 1, rooms, min_size, max_size, next_entry_wall, exit_door,
                   grid_size))
      break;
  }
  return true;
}

Pos random_interior_cell(Rng& rng, const Room& room) {
  return {room.top.x + rng.range(1, room.size.x - 1), room.top.y + rng.range(1, room.size.y - 1)};
}

Colour random_colour(Rng& rng) { return static_cast<Colour>(rng.below(kNumColours)); }

Colour random_colour_except(Rng& rng, Colour excluded) {
  auto c = static_cast<int>(rng.below(kNumColours - 1));
  if (c >= static_cast<int>(excluded)) ++c;
  return static_cast<Colour>(c);
}

bool try_multi_room(const LevelSpec& spec, Rng& rng, Level& level) {
  const int grid_size = kMultiRoomGridSize;
  std::vector<Room> rooms;
  for (int attempt = 0; attempt < kMultiRoomAttempts; ++attempt) {
    std::vector<Room> candidate;
    const Pos entry{rng.range(0, grid_size - 2), rng.range(0, grid_size - 2)};
    place_room(rng, spec.num_rooms, candidate, 4, spec.max_room_size, 2, entry, grid_size);
    if (candidate.size() > rooms.size()) rooms = std::move(candidate);
    if (static_cast<int>(rooms.size()) >= spec.num_rooms) break;
  }
  if (static_cast<int>(rooms.size()) < spec.num_rooms) return false;

  Grid grid(grid_size, grid_size, Cell::wall());
  for (const Room& room : rooms) {
    for (int y = room.top.y + 1; y < room.top.y + room.size.y - 1; ++y) {
      for (int x = room.top.x + 1; x < room.top.x + room.size.x - 1; ++x) {
        grid.at({x, y}) = Cell::empty();
      }
    }
  }
  std::optional<Colour> previous_colour;
  for (std::size_t i = 1; i < rooms.size(); ++i) {
    const Colour colour =
        previous_colour ? random_colour_except(rng, *previous_colour) : random_colour(rng);
    grid.at(rooms[i].entry_door) = Cell::door(colour, CellState::kClosed);
    previous_colour = colour;
  }

  level.agent_pos = random_interior_cell(rng, rooms.front());
  level.agent_dir = rng.range(0, 4);
  Pos goal = random_interior_cell(rng, rooms.back());
  while (goal == level.agent_pos) goal = random_interior_cell(rng, rooms.back());
  grid.at(goal) = Cell::goal();
  level.grid = std::move(grid);
  return true;
}

// Two rooms sharing a wall with a locked door. The agent's room holds a ball
// parked in front of the door and a box hiding the matching key; the target
// ball waits in the other room.
bool try_key_door_ball(const LevelSpec& spec, Rng& rng, Level& level) {
  const int s = spec.max_room_size;
  Grid grid(2 * s - 1, s, Cell::wall());
  for (int y = 1; y < s - 1; ++y) {
    for (int x = 1; x < 2 * s - 2; ++x) {
      if (x != s - 1) grid.at({x, y}) = Cell::empty();
    }
  }
  const bool agent_left = rng.below(2) == 0;
  const int door_y = rng.range(1, s - 1);
  const Pos door{s - 1, door_y};
  const Colour door_colour = random_colour(rng);
  grid.at(door) = Cell::door(door_colour, CellState::kLocked);

  const int agent_lo = agent_left ? 1 : s;
  const int other_lo = agent_left ? s : 1;
  const int room_hi_offset = s - 2;  // interior width
  auto random_cell = [&](int x_lo) {
    return Pos{x_lo + rng.range(0, room_hi_offset), rng.range(1, s - 1)};
  };

  const Pos blocker{agent_left ? s - 2 : s, door_y};
  level.target_colour = Colour::kBlue;
  grid.at(blocker) = Cell::ball(random_colour_except(rng, level.target_colour));

  Pos box = random_cell(agent_lo);
  while (box == blocker) box = random_cell(agent_lo);
  grid.at(box) = Cell::box(random_colour(rng), ObjectKind::kKey, door_colour);

  Pos agent = random_cell(agent_lo);
  while (agent == blocker || agent == box) agent = random_cell(agent_lo);
  level.agent_pos = agent;
  level.agent_dir = rng.range(0, 4);

  const Pos target = random_cell(other_lo);
  grid.at(target) = Cell::ball(level.target_colour);
  level.grid = std::move(grid);
  return true;
}

}  // namespace

Level generate_level(const LevelSpec& spec) {
  spec.validate();
  Level level;
  level.spec = spec;
  std::uint64_t seed = spec.seed;
  for (int reseed = 0; reseed <= kMaxReseeds; ++reseed) {
    Rng rng(derive_seed(seed, kLevelStream));
    const bool ok = spec.family == TaskFamily::kMultiRoom ? try_multi_room(spec, rng, level)
                                                          : try_key_door_ball(spec, rng, level);
    if (ok) return level;
    ++level.generation_failures;
    seed = spec.seed ^ (kReseedMask + static_cast<std::uint64_t>(reseed));
  }
  fail(ErrorCode::kGenerationFailed,
       "level generation failed after reseeding: " + spec.to_text());
}

}  // namespace pcgil::gridworld
