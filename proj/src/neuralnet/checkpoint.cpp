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
#include "neuralnet/checkpoint.hpp"

#include <fstream>

#include "common/binary_io.hpp"
#include "common/error.hpp"

namespace pcgil::nn {

namespace {
constexpr char kMagic[8] = {'P', 'C', 'G', 'N', 'E', 'T', '\0', '\0'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

void save_network(const DenseNet& net, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  out.write(kMagic, sizeof(kMagic));
  io::write<std::uint32_t>(out, kVersion);
  io::write<std::uint32_t>(out, static_cast<std::uint32_t>(net.layers().size()));
  for (const auto& l : net.layers()) {
    io::write<std::uint32_t>(out, static_cast<std::uint32_t>(l.weight.rows()));
    io::write<std::uint32_t>(out, static_cast<std::uint32_t>(l.weight.cols()));
  }
  for (const auto& l : net.layers()) {
    for (Eigen::Index r = 0; r < l.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < l.weight.cols(); ++c) io::write<double>(out, l.weight(r, c));
    }
    for (Eigen::Index r = 0; r < l.bias.size(); ++r) io::write<double>(out, l.bias(r));
  }
  require(static_cast<bool>(out), ErrorCode::kIo, "write failed for " + path.string());
}

DenseNet load_network(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::kIo, "cannot open " + path.string());
  io::expect_magic(in, kMagic, sizeof(kMagic));
  require(io::read<std::uint32_t>(in) == kVersion, ErrorCode::kFormat,
          "unsupported network checkpoint version");
  const auto n = io::read<std::uint32_t>(in);
  require(n == DenseNet::kNumLayers, ErrorCode::kFormat, "unexpected layer count in checkpoint");
  LayerSet layers(n);
  for (auto& l : layers) {
    const auto rows = io::read<std::uint32_t>(in);
    const auto cols = io::read<std::uint32_t>(in);
    require(rows > 0 && cols > 0 && rows <= 1u << 16 && cols <= 1u << 16, ErrorCode::kFormat,
            "bad layer shape in checkpoint");
    l.weight.resize(rows, cols);
    l.bias.resize(rows);
  }
  for (auto& l : layers) {
    for (Eigen::Index r = 0; r < l.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < l.weight.cols(); ++c) l.weight(r, c) = io::read<double>(in);
    }
    for (Eigen::Index r = 0; r < l.bias.size(); ++r) l.bias(r) = io::read<double>(in);
  }
  return DenseNet(std::move(layers));
}

}  // namespace pcgil::nn
