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

#ifndef ASCL_NN_ADAM_H_
#define ASCL_NN_ADAM_H_

#include <cstdint>
#include <vector>

#include "ascl/nn/layers.h"

namespace ascl::nn {

struct AdamOptions {
  double lr = 2e-4;
  double beta1 = 0.8;
  double beta2 = 0.99;
  double eps = 1e-9;
};

// Adam over a fixed parameter list. Only the parameters handed to the
// constructor are ever written.
class Adam {
 public:
  Adam(NamedTensors params, AdamOptions opt);

  void zero_grad();
  void step();

  double lr() const { return opt_.lr; }
  void set_lr(double lr) { opt_.lr = lr; }
  int64_t steps() const { return t_; }

  const NamedTensors& params() const { return params_; }

  // Moment buffers exposed for checkpointing.
  std::vector<std::vector<double>>& first_moments() { return m_; }
  std::vector<std::vector<double>>& second_moments() { return v_; }
  void set_steps(int64_t t) { t_ = t; }

 private:
  NamedTensors params_;
  AdamOptions opt_;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
  int64_t t_ = 0;
};

}  // namespace ascl::nn

#endif  // ASCL_NN_ADAM_H_
