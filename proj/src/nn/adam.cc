// Copyright (c) 2026 The ascl-vits Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ascl/nn/adam.h"

#include <cmath>

namespace ascl::nn {

Adam::Adam(NamedTensors params, AdamOptions opt) : params_(std::move(params)), opt_(opt) {
  for (const auto& p : params_) {
    m_.emplace_back(p.tensor.numel(), 0.0);
    v_.emplace_back(p.tensor.numel(), 0.0);
  }
}

void Adam::zero_grad() {
  for (auto& p : params_) p.tensor.zero_grad();
}

void Adam::step() {
  ++t_;
  const double bc1 = 1.0 - std::pow(opt_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(opt_.beta2, static_cast<double>(t_));
  for (size_t i = 0; i < params_.size(); ++i) {
    Tensor& p = params_[i].tensor;
    if (!p.has_grad()) {
      // A missing gradient is a zero gradient; the moments still decay.
      for (size_t j = 0; j < m_[i].size(); ++j) {
        m_[i][j] *= opt_.beta1;
        v_[i][j] *= opt_.beta2;
      }
    } else {
      const auto& g = p.node()->grad;
      for (size_t j = 0; j < m_[i].size(); ++j) {
        m_[i][j] = opt_.beta1 * m_[i][j] + (1.0 - opt_.beta1) * g[j];
        v_[i][j] = opt_.beta2 * v_[i][j] + (1.0 - opt_.beta2) * g[j] * g[j];
      }
    }
    auto w = p.mutable_data();
    for (size_t j = 0; j < w.size(); ++j) {
      const double mh = m_[i][j] / bc1;
      const double vh = v_[i][j] / bc2;
      w[j] -= opt_.lr * mh / (std::sqrt(vh) + opt_.eps);
    }
  }
}

}  // namespace ascl::nn
