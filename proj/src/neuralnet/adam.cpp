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
#include "neuralnet/adam.hpp"

#include <cmath>

#include "common/error.hpp"

namespace pcgil::nn {

double clip_global_norm(LayerSet& grads, double max_norm) {
  const double norm = std::sqrt(squared_norm(grads));
  if (max_norm > 0.0 && norm > max_norm) scale(grads, max_norm / norm);
  return norm;
}

Adam::Adam(const DenseNet& net, AdamConfig config)
    : config_(config), m_(zeros_like(net.layers())), v_(zeros_like(net.layers())) {
  require(config.learning_rate > 0.0 && config.epsilon > 0.0 && config.beta1 >= 0.0 &&
              config.beta1 < 1.0 && config.beta2 >= 0.0 && config.beta2 < 1.0,
          ErrorCode::kInvalidArgument, "invalid Adam hyperparameters");
}

double Adam::step(DenseNet& net, LayerSet grads) {
  auto& params = net.layers();
  require(grads.size() == params.size() && m_.size() == params.size(),
          ErrorCode::kInvalidArgument, "gradient/optimizer shape mismatch");
  for (std::size_t i = 0; i < params.size(); ++i) {
    require(grads[i].weight.rows() == params[i].weight.rows() &&
                grads[i].weight.cols() == params[i].weight.cols() &&
                grads[i].bias.size() == params[i].bias.size(),
            ErrorCode::kInvalidArgument, "gradient/parameter shape mismatch");
  }
  require(all_finite(grads), ErrorCode::kNonFinite, "non-finite gradients, halting training");

  const double norm = clip_global_norm(grads, config_.max_grad_norm);
  ++t_;
  const double b1 = config_.beta1;
  const double b2 = config_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
  const double lr = config_.learning_rate;
  const double eps = config_.epsilon;

  auto update = [&](auto& p, auto& m, auto& v, const auto& g) {
    m = b1 * m + (1.0 - b1) * g;
    v = b2 * v + (1.0 - b2) * g.cwiseProduct(g);
    p.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + eps);
  };
  for (std::size_t i = 0; i < params.size(); ++i) {
    update(params[i].weight, m_[i].weight, v_[i].weight, grads[i].weight);
    update(params[i].bias, m_[i].bias, v_[i].bias, grads[i].bias);
  }
  return norm;
}

}  // namespace pcgil::nn
