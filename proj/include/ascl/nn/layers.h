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

#ifndef ASCL_NN_LAYERS_H_
#define ASCL_NN_LAYERS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "ascl/nn/ops.h"
#include "ascl/nn/tensor.h"
#include "ascl/rng.h"

namespace ascl::nn {

struct NamedTensor {
  std::string name;
  Tensor tensor;
};
using NamedTensors = std::vector<NamedTensor>;

// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) parameter.
Tensor init_uniform(Shape shape, int64_t fan_in, Rng& rng);
Tensor init_zeros(Shape shape);

class Linear {
 public:
  Linear() = default;
  Linear(int64_t in, int64_t out, Rng& rng, bool bias = true);

  // x [in] or [in, T].
  Tensor operator()(const Tensor& x) const { return linear(x, weight, bias); }
  void collect(NamedTensors& out, const std::string& prefix) const;
  void zero_init();

  Tensor weight;  // [out, in]
  Tensor bias;    // [out]
};

class Conv1d {
 public:
  Conv1d() = default;
  Conv1d(int64_t in, int64_t out, int64_t kernel, Rng& rng, ConvOptions opt = {});

  Tensor operator()(const Tensor& x) const { return conv1d(x, weight, bias, opt); }
  void collect(NamedTensors& out, const std::string& prefix) const;
  void zero_init();

  Tensor weight;  // [out, in/groups, kernel]
  Tensor bias;
  ConvOptions opt;
};

class ConvTranspose1d {
 public:
  ConvTranspose1d() = default;
  ConvTranspose1d(int64_t in, int64_t out, int64_t kernel, int64_t stride,
                  int64_t padding, Rng& rng);

  Tensor operator()(const Tensor& x) const {
    return conv_transpose1d(x, weight, bias, stride, padding);
  }
  void collect(NamedTensors& out, const std::string& prefix) const;

  Tensor weight;  // [in, out, kernel]
  Tensor bias;
  int64_t stride = 1;
  int64_t padding = 0;
};

class Conv2d {
 public:
  Conv2d() = default;
  Conv2d(int64_t in, int64_t out, int64_t kernel, int64_t stride, int64_t padding,
         Rng& rng);

  Tensor operator()(const Tensor& x) const { return conv2d(x, weight, bias, stride, padding); }
  void collect(NamedTensors& out, const std::string& prefix) const;

  Tensor weight;  // [out, in, k, k]
  Tensor bias;
  int64_t stride = 1;
  int64_t padding = 0;
};

// Single-layer GRU over the columns of x [in, T]; returns the last state [hidden].
class Gru {
 public:
  Gru() = default;
  Gru(int64_t in, int64_t hidden, Rng& rng);

  Tensor last_state(const Tensor& x) const;
  void collect(NamedTensors& out, const std::string& prefix) const;
  int64_t hidden() const { return hidden_; }

  Linear input_gates;   // in -> 3*hidden (reset, update, candidate)
  Linear hidden_gates;  // hidden -> 3*hidden

 private:
  int64_t hidden_ = 0;
};

// Sum of squared parameter values, used for diagnostics.
double squared_norm(const NamedTensors& params);

}  // namespace ascl::nn

#endif  // ASCL_NN_LAYERS_H_
