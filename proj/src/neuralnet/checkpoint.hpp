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
#ifndef PCGIL_NEURALNET_CHECKPOINT_HPP_
#define PCGIL_NEURALNET_CHECKPOINT_HPP_

#include <filesystem>

#include "neuralnet/dense_net.hpp"

namespace pcgil::nn {

// Binary layout (little-endian):
//   "PCGNET\0\0"  u32 version(=1)  u32 num_layers
//   per layer: u32 rows, u32 cols
//   per layer: rows*cols f64 weights (row-major), then rows f64 biases
void save_network(const DenseNet& net, const std::filesystem::path& path);
DenseNet load_network(const std::filesystem::path& path);

}  // namespace pcgil::nn

#endif  // PCGIL_NEURALNET_CHECKPOINT_HPP_
