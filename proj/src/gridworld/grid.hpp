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
#ifndef PCGIL_GRIDWORLD_GRID_HPP_
#define PCGIL_GRIDWORLD_GRID_HPP_

#include <cstdint>
#include <vector>

namespace pcgil::gridworld {

// Ids are the observation encoding; kUnseen only appears in observations.
enum class ObjectKind : std::uint8_t {
  kUnseen = 0,
  kEmpty = 1,
  kWall = 2,
  kDoor = 3,
  kKey = 4,
  kBall = 5,
  kBox = 6,
  kGoal = 7,
};
inline constexpr int kNumObjectKinds = 8;

enum class Colour : std::uint8_t { kRed = 0, kGreen, kBlue, kPurple, kYellow, kGrey };
inline constexpr int kNumColours = 6;

enum class CellState : std::uint8_t { kOpen = 0, kClosed = 1, kLocked = 2, kNone = 3 };
inline constexpr int kNumCellStates = 4;

struct Pos {
  int x = 0;
  int y = 0;
  friend bool operator==(const Pos&, const Pos&) = default;
  Pos operator+(const Pos& o) const { return {x + o.x, y + o.y}; }
};

// Direction 0 faces +x, then clockwise (1 = +y, 2 = -x, 3 = -y).
inline constexpr Pos kDirVec[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

struct Cell {
  ObjectKind kind = ObjectKind::kEmpty;
  Colour colour = Colour::kRed;
  CellState state = CellState::kNone;
  // Contents of a box; kEmpty otherwise.
  ObjectKind inner = ObjectKind::kEmpty;
  Colour inner_colour = Colour::kRed;

  static Cell empty() { return {}; }
  static Cell wall() { return {ObjectKind::kWall, Colour::kGrey, CellState::kNone}; }
  static Cell goal() { return {ObjectKind::kGoal, Colour::kGreen, CellState::kNone}; }
  static Cell door(Colour c, CellState s) { return {ObjectKind::kDoor, c, s}; }
  static Cell key(Colour c) { return {ObjectKind::kKey, c, CellState::kNone}; }
  static Cell ball(Colour c) { return {ObjectKind::kBall, c, CellState::kNone}; }
  static Cell box(Colour c, ObjectKind inner, Colour inner_colour) {
    return {ObjectKind::kBox, c, CellState::kNone, inner, inner_colour};
  }

  bool walkable() const {
    return kind == ObjectKind::kEmpty || kind == ObjectKind::kGoal ||
           (kind == ObjectKind::kDoor && state == CellState::kOpen);
  }
  bool opaque() const {
    return kind == ObjectKind::kWall || (kind == ObjectKind::kDoor && state != CellState::kOpen);
  }
  bool carriable() const { return kind == ObjectKind::kKey || kind == ObjectKind::kBall; }

  friend bool operator==(const Cell&, const Cell&) = default;
};

class Grid {
 public:
  Grid() = default;
  Grid(int width, int height, Cell fill = Cell::wall());

  int width() const { return width_; }
  int height() const { return height_; }

  bool in_bounds(Pos p) const { return p.x >= 0 && p.y >= 0 && p.x < width_ && p.y < height_; }

  const Cell& at(Pos p) const { return cells_[index(p)]; }
  Cell& at(Pos p) { return cells_[index(p)]; }

  // Out-of-bounds reads behave as wall.
  Cell get(Pos p) const { return in_bounds(p) ? at(p) : Cell::wall(); }

  std::size_t index(Pos p) const {
    return static_cast<std::size_t>(p.y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(p.x);
  }
  Pos pos(std::size_t i) const {
    return {static_cast<int>(i % static_cast<std::size_t>(width_)),
            static_cast<int>(i / static_cast<std::size_t>(width_))};
  }

  const std::vector<Cell>& cells() const { return cells_; }

  // Byte-level serialization used for determinism checks.
  std::vector<std::uint8_t> to_bytes() const;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<Cell> cells_;
};

}  // namespace pcgil::gridworld

#endif  // PCGIL_GRIDWORLD_GRID_HPP_
