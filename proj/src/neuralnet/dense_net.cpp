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
#include "neuralnet/dense_net.hpp"

#include <string>

#include "common/error.hpp"

namespace pcgil::nn {

LayerSet zeros_like(const LayerSet& layers) {
  LayerSet out;
  out.reserve(layers.size());
  for (const auto& l : layers) {
    out.push_back({Eigen::MatrixXd::Zero(l.weight.rows(), l.weight.cols()),
                   Eigen::VectorXd::Zero(l.bias.size())});
  }
  return out;
}

double squared_norm(const LayerSet& layers) {
  double s = 0.0;
  for (const auto& l : layers) s += l.weight.squaredNorm() + l.bias.squaredNorm();
  return s;
}

void scale(LayerSet& layers, double factor) {
  for (auto& l : layers) {
    l.weight *= factor;
    l.bias *= factor;
  }
}

void add_to(LayerSet& acc, const LayerSet& term) {
  require(acc.size() == term.size(), ErrorCode::kInvalidArgument, "layer count mismatch");
  for (std::size_t i = 0; i < acc.size(); ++i) {
    acc[i].weight += term[i].weight;
    acc[i].bias += term[i].bias;
  }
}

bool all_finite(const LayerSet& layers) {
  for (const auto& l : layers) {
    if (!l.weight.allFinite() || !l.bias.allFinite()) return false;
  }
  return true;
}

DenseNet::DenseNet(LayerSet layers) : layers_(std::move(layers)) {
  require(layers_.size() == kNumLayers, ErrorCode::kInvalidArgument,
          "dense net needs exactly two hidden layers");
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto& l = layers_[i];
    require(l.weight.rows() > 0 && l.weight.cols() > 0 && l.bias.size() == l.weight.rows(),
            ErrorCode::kInvalidArgument, "layer " + std::to_string(i) + " has inconsistent shape");
    if (i > 0) {
      require(layers_[i - 1].weight.rows() == l.weight.cols(), ErrorCode::kInvalidArgument,
              "layer shapes do not chain at layer " + std::to_string(i));
    }
  }
  require(all_finite(layers_), ErrorCode::kNonFinite, "non-finite parameters");
}

namespace {

// Q factor of a Gaussian matrix, sign-corrected so the distribution is
// uniform over orthogonal matrices.
Eigen::MatrixXd orthogonal(int rows, int cols, double gain, Rng& rng) {
  const bool tall = rows >= cols;
  const int n = tall ? rows : cols;
  const int k = tall ? cols : rows;
  Eigen::MatrixXd a(n, k);
  for (int j = 0; j < k; ++j) {
    for (int i = 0; i < n; ++i) a(i, j) = rng.normal();
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, k);
  const Eigen::MatrixXd r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  for (int j = 0; j < k; ++j) {
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  }
  Eigen::MatrixXd w = tall ? q : Eigen::MatrixXd(q.transpose());
  return gain * w;
}

}  // namespace

DenseNet DenseNet::create(int input_dim, int output_dim, double output_gain,
                          const InitConfig& init, Rng& rng) {
  require(input_dim > 0 && output_dim > 0 && init.hidden > 0, ErrorCode::kInvalidArgument,
          "network dimensions must be positive");
  LayerSet layers;
  const int dims[4] = {input_dim, init.hidden, init.hidden, output_dim};
  for (int i = 0; i < 3; ++i) {
    const double gain = i == 2 ? output_gain : init.hidden_gain;
    layers.push_back({orthogonal(dims[i + 1], dims[i], gain, rng),
                      Eigen::VectorXd::Zero(dims[i + 1])});
  }
  return DenseNet(std::move(layers));
}

std::size_t DenseNet::num_parameters() const {
  std::size_t n = 0;
  for (const auto& l : layers_) n += static_cast<std::size_t>(l.weight.size() + l.bias.size());
  return n;
}

Eigen::MatrixXd DenseNet::forward(const Eigen::MatrixXd& input, ForwardCache* cache) const {
  require(!layers_.empty(), ErrorCode::kInvalidArgument, "forward on an empty network");
  require(input.rows() == input_dim(), ErrorCode::kInvalidArgument,
          "input has " + std::to_string(input.rows()) + " rows, network expects " +
              std::to_string(input_dim()));
  require(input.allFinite(), ErrorCode::kNonFinite, "non-finite network input");
  if (cache) cache->inputs.clear();
  Eigen::MatrixXd x = input;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    if (cache) cache->inputs.push_back(x);
    Eigen::MatrixXd z = layers_[i].weight * x;
    z.colwise() += layers_[i].bias;
    if (i + 1 < layers_.size()) {
      x = z.array().tanh().matrix();
    } else {
      x = std::move(z);
    }
  }
  if (cache) cache->output = x;
  return x;
}

LayerSet DenseNet::backward(const ForwardCache& cache,
                            const Eigen::MatrixXd& output_gradient) const {
  require(cache.inputs.size() == layers_.size(), ErrorCode::kInvalidArgument,
          "forward cache does not match network");
  require(output_gradient.rows() == output_dim() &&
              output_gradient.cols() == cache.output.cols(),
          ErrorCode::kInvalidArgument, "output gradient shape mismatch");
  LayerSet grads(layers_.size());
  Eigen::MatrixXd delta = output_gradient;  // dL/dz for the current layer
  for (std::size_t i = layers_.size(); i-- > 0;) {
    const Eigen::MatrixXd& in = cache.inputs[i];
    require(in.rows() == layers_[i].weight.cols(), ErrorCode::kInvalidArgument,
            "forward cache does not match network");
    grads[i].weight.noalias() = delta * in.transpose();
    grads[i].bias = delta.rowwise().sum();
    if (i == 0) break;
    Eigen::MatrixXd upstream = layers_[i].weight.transpose() * delta;
    // in = tanh(z_prev)  =>  dtanh = 1 - in^2
    delta = upstream.array() * (1.0 - in.array().square());
  }
  return grads;
}

bool operator==(const DenseNet& a, const DenseNet& b) {
  if (a.layers_.size() != b.layers_.size()) return false;
  for (std::size_t i = 0; i < a.layers_.size(); ++i) {
    const auto& x = a.layers_[i];
    const auto& y = b.layers_[i];
    if (x.weight.rows() != y.weight.rows() || x.weight.cols() != y.weight.cols() ||
        x.weight != y.weight || x.bias != y.bias)
      return false;
  }
  return true;
}

}  // namespace pcgil::nn
