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
#ifndef PCGIL_NEURALNET_ADAM_HPP_
#define PCGIL_NEURALNET_ADAM_HPP_

#include <cstdint>

#include "neuralnet/dense_net.hpp"

namespace pcgil::nn {

struct AdamConfig {
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-5;
  // Global L2 norm clip applied before the moment update; <= 0 disables it.
  double max_grad_norm = 0.5;
};

// Rescales grads in place so their global norm is at most max_norm.
// Returns the norm before clipping.
double clip_global_norm(LayerSet& grads, double max_norm);

class Adam {
 public:
  Adam() = default;
  Adam(const DenseNet& net, AdamConfig config);

  // One clipped, bias-corrected Adam update. Throws Error(kNonFinite) for
  // non-finite gradients, leaving params and state untouched. Returns the
  // pre-clip gradient norm.
  double step(DenseNet& net, LayerSet grads);

  std::int64_t steps() const { return t_; }
  const AdamConfig& config() const { return config_; }
  const LayerSet& first_moment() const { return m_; }
  const LayerSet& second_moment() const { return v_; }

 private:
  AdamConfig config_;
  LayerSet m_;
  LayerSet v_;
  std::int64_t t_ = 0;
};

}  // namespace pcgil::nn

#endif  // PCGIL_NEURALNET_ADAM_HPP_
