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

#ifndef ASCL_NN_OPS_H_
#define ASCL_NN_OPS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "ascl/nn/tensor.h"

// Differentiable operations. Sequence tensors are laid out [channels, time];
// a batch is processed one item at a time by the callers.
namespace ascl::nn {

// Elementwise, identical shapes.
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double s);
Tensor add_scalar(const Tensor& a, double s);

// x has shape [C, ...]; v has C elements and is broadcast over the rest.
Tensor add_channel(const Tensor& x, const Tensor& v);
// x [C, ...] multiplied per channel by v [C].
Tensor mul_channel(const Tensor& x, const Tensor& v);

Tensor exp(const Tensor& a);
Tensor log(const Tensor& a);
// log(max(a, floor)); zero gradient where the floor is active.
Tensor log_clamp(const Tensor& a, double floor);
Tensor sqrt(const Tensor& a);
Tensor tanh(const Tensor& a);
Tensor sigmoid(const Tensor& a);
Tensor relu(const Tensor& a);
Tensor leaky_relu(const Tensor& a, double slope);
Tensor square(const Tensor& a);
Tensor abs(const Tensor& a);
// Hard clamp; gradient passes only strictly inside [lo, hi].
Tensor clamp(const Tensor& a, double lo, double hi);

Tensor sum(const Tensor& a);
Tensor mean(const Tensor& a);

Tensor reshape(const Tensor& a, Shape shape);
Tensor transpose(const Tensor& a);  // rank 2

// [m, k] x [k, n] -> [m, n].
Tensor matmul(const Tensor& a, const Tensor& b);
// weight [out, in]; x [in] or [in, T]; bias [out] may be undefined.
Tensor linear(const Tensor& x, const Tensor& weight, const Tensor& bias);

struct ConvOptions {
  int64_t stride = 1;
  int64_t padding = 0;
  int64_t dilation = 1;
  int64_t groups = 1;
};

// x [Cin, L]; weight [Cout, Cin/groups, K]; bias [Cout] or undefined.
Tensor conv1d(const Tensor& x, const Tensor& weight, const Tensor& bias,
              const ConvOptions& opt = {});
int64_t conv1d_output_length(int64_t length, int64_t kernel, const ConvOptions& opt);

// x [Cin, L]; weight [Cin, Cout, K]. Output length (L-1)*stride - 2*padding + K.
Tensor conv_transpose1d(const Tensor& x, const Tensor& weight, const Tensor& bias,
                        int64_t stride, int64_t padding);

// x [Cin, H, W]; weight [Cout, Cin, KH, KW].
Tensor conv2d(const Tensor& x, const Tensor& weight, const Tensor& bias,
              int64_t stride, int64_t padding);

// Rank-2 slicing along rows (channels) or columns (time).
Tensor slice_rows(const Tensor& x, int64_t start, int64_t count);
Tensor slice_cols(const Tensor& x, int64_t start, int64_t count);
Tensor concat_rows(const Tensor& a, const Tensor& b);
Tensor flip_rows(const Tensor& x);
// out[:, j] = x[:, index[j]].
Tensor gather_cols(const Tensor& x, std::span<const int64_t> index);
// Reflect padding of the columns of x [C, L] (no edge repeat).
Tensor reflect_pad_cols(const Tensor& x, int64_t left, int64_t right);
// table [V, H], ids -> [H, len(ids)].
Tensor embedding(const Tensor& table, std::span<const int> ids);

// Mean absolute / squared difference over all elements.
Tensor l1_loss(const Tensor& a, const Tensor& b);
Tensor mse_loss(const Tensor& a, const Tensor& b);

}  // namespace ascl::nn

#endif  // ASCL_NN_OPS_H_
