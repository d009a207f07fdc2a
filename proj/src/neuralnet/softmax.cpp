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
#include "neuralnet/softmax.hpp"

#include <cmath>

#include "common/error.hpp"

namespace pcgil::nn {

LogSoftmax softmax_logprob_entropy(const Eigen::VectorXd& logits) {
  require(logits.size() > 0, ErrorCode::kInvalidArgument, "empty logits");
  require(logits.allFinite(), ErrorCode::kNonFinite, "non-finite logits");
  LogSoftmax out;
  const double max = logits.maxCoeff();
  const Eigen::ArrayXd shifted = logits.array() - max;
  const double lse = std::log(shifted.exp().sum());
  out.log_probs = (shifted - lse).matrix();
  const Eigen::ArrayXd p = out.log_probs.array().exp();
  out.entropy = -(p * out.log_probs.array()).sum();
  return out;
}

Eigen::MatrixXd log_softmax_columns(const Eigen::MatrixXd& logits) {
  require(logits.allFinite(), ErrorCode::kNonFinite, "non-finite logits");
  Eigen::MatrixXd out(logits.rows(), logits.cols());
  for (Eigen::Index j = 0; j < logits.cols(); ++j) {
    const double max = logits.col(j).maxCoeff();
    const Eigen::ArrayXd shifted = logits.col(j).array() - max;
    out.col(j) = (shifted - std::log(shifted.exp().sum())).matrix();
  }
  return out;
}

}  // namespace pcgil::nn
