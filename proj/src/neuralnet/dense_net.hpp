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
#ifndef PCGIL_NEURALNET_DENSE_NET_HPP_
#define PCGIL_NEURALNET_DENSE_NET_HPP_

#include <Eigen/Dense>

#include <vector>

#include "common/rng.hpp"

namespace pcgil::nn {

struct DenseLayer {
  Eigen::MatrixXd weight;  // out x in
  Eigen::VectorXd bias;    // out
};

// Parameter-shaped container, also used for gradients and Adam moments.
using LayerSet = std::vector<DenseLayer>;

LayerSet zeros_like(const LayerSet& layers);
double squared_norm(const LayerSet& layers);
void scale(LayerSet& layers, double factor);
void add_to(LayerSet& acc, const LayerSet& term);
bool all_finite(const LayerSet& layers);

struct InitConfig {
  int hidden = 64;
  double hidden_gain = 1.4142135623730951;
};

// Activations kept by forward() for backprop. Columns are samples.
struct ForwardCache {
  std::vector<Eigen::MatrixXd> inputs;  // input to each layer
  Eigen::MatrixXd output;
};

// tanh MLP with exactly two hidden layers and a linear output layer.
class DenseNet {
 public:
  static constexpr std::size_t kNumLayers = 3;

  DenseNet() = default;
  explicit DenseNet(LayerSet layers);

  // Orthogonal init: hidden layers scaled by init.hidden_gain, the output
  // layer by output_gain; biases zero.
  static DenseNet create(int input_dim, int output_dim, double output_gain,
                         const InitConfig& init, Rng& rng);

  int input_dim() const { return static_cast<int>(layers_.front().weight.cols()); }
  int output_dim() const { return static_cast<int>(layers_.back().weight.rows()); }
  std::size_t num_parameters() const;

  const LayerSet& layers() const { return layers_; }
  LayerSet& layers() { return layers_; }

  // input is input_dim x batch. Fills cache when non-null.
  Eigen::MatrixXd forward(const Eigen::MatrixXd& input, ForwardCache* cache = nullptr) const;

  // Gradients of sum(output .* output_gradient) w.r.t. every parameter.
  LayerSet backward(const ForwardCache& cache, const Eigen::MatrixXd& output_gradient) const;

  friend bool operator==(const DenseNet& a, const DenseNet& b);

 private:
  LayerSet layers_;
};

}  // namespace pcgil::nn

#endif  // PCGIL_NEURALNET_DENSE_NET_HPP_
