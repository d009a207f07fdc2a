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
#ifndef PCGIL_NEURALNET_SOFTMAX_HPP_
#define PCGIL_NEURALNET_SOFTMAX_HPP_

#include <Eigen/Dense>

namespace pcgil::nn {

struct LogSoftmax {
  Eigen::VectorXd log_probs;
  double entropy = 0.0;

  Eigen::VectorXd probs() const { return log_probs.array().exp().matrix(); }
};

// Max-subtracted log-softmax and its entropy -sum p log p.
LogSoftmax softmax_logprob_entropy(const Eigen::VectorXd& logits);

// Column-wise version for a batch of logits (actions x batch).
Eigen::MatrixXd log_softmax_columns(const Eigen::MatrixXd& logits);

}  // namespace pcgil::nn

#endif  // PCGIL_NEURALNET_SOFTMAX_HPP_
