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
#include "gridworld/grid.hpp"

#include "common/error.hpp"

namespace pcgil::gridworld {

Grid::Grid(int width, int height, Cell fill) : width_(width), height_(height) {
  require(width > 0 && height > 0, ErrorCode::kInvalidArgument, "grid dimensions must be positive");
  cells_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

std::vector<std::uint8_t> Grid::to_bytes() const {
  std::vector<std::uint8_t> out;
  out.reserve(8 + cells_.size() * 5);
  for (int shift = 0; shift < 32; shift += 8) out.push_back(static_cast<std::uint8_t>(width_ >> shift));
  for (int shift = 0; shift < 32; shift += 8) out.push_back(static_cast<std::uint8_t>(height_ >> shift));
  for (const Cell& c : cells_) {
    out.push_back(static_cast<std::uint8_t>(c.kind));
    out.push_back(static_cast<std::uint8_t>(c.colour));
    out.push_back(static_cast<std::uint8_t>(c.state));
    out.push_back(static_cast<std::uint8_t>(c.inner));
    out.push_back(static_cast<std::uint8_t>(c.inner_colour));
  }
  return out;
}

}  // namespace pcgil::gridworld
