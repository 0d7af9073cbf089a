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

#include "ascl/nn/layers.h"

#include <cmath>

namespace ascl::nn {

Tensor init_uniform(Shape shape, int64_t fan_in, Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  std::vector<double> v(numel_of(shape));
  for (double& x : v) x = rng.uniform(-bound, bound);
  return Tensor::parameter(std::move(shape), std::move(v));
}

Tensor init_zeros(Shape shape) {
  std::vector<double> v(numel_of(shape), 0.0);
  return Tensor::parameter(std::move(shape), std::move(v));
}

namespace {
void zero_fill(Tensor& t) {
  if (!t.defined()) return;
  for (double& v : t.mutable_data()) v = 0.0;
}
}  // namespace

Linear::Linear(int64_t in, int64_t out, Rng& rng, bool with_bias)
    : weight(init_uniform({out, in}, in, rng)) {
  if (with_bias) bias = init_uniform({out}, in, rng);
}

void Linear::collect(NamedTensors& out, const std::string& prefix) const {
  out.push_back({prefix + ".weight", weight});
  if (bias.defined()) out.push_back({prefix + ".bias", bias});
}

void Linear::zero_init() {
  zero_fill(weight);
  zero_fill(bias);
}

Conv1d::Conv1d(int64_t in, int64_t out, int64_t kernel, Rng& rng, ConvOptions o)
    : opt(o) {
  const int64_t fan_in = in / o.groups * kernel;
  weight = init_uniform({out, in / o.groups, kernel}, fan_in, rng);
  bias = init_uniform({out}, fan_in, rng);
}

void Conv1d::collect(NamedTensors& out, const std::string& prefix) const {
  out.push_back({prefix + ".weight", weight});
  out.push_back({prefix + ".bias", bias});
}

void Conv1d::zero_init() {
  zero_fill(weight);
  zero_fill(bias);
}

ConvTranspose1d::ConvTranspose1d(int64_t in, int64_t out, int64_t kernel, int64_t s,
                                 int64_t p, Rng& rng)
    : stride(s), padding(p) {
  // PyTorch's fan-in convention for transposed convolutions.
  weight = init_uniform({in, out, kernel}, out * kernel, rng);
  bias = init_uniform({out}, out * kernel, rng);
}

void ConvTranspose1d::collect(NamedTensors& out, const std::string& prefix) const {
  out.push_back({prefix + ".weight", weight});
  out.push_back({prefix + ".bias", bias});
}

Conv2d::Conv2d(int64_t in, int64_t out, int64_t kernel, int64_t s, int64_t p, Rng& rng)
    : stride(s), padding(p) {
  weight = init_uniform({out, in, kernel, kernel}, in * kernel * kernel, rng);
  bias = init_uniform({out}, in * kernel * kernel, rng);
}

void Conv2d::collect(NamedTensors& out, const std::string& prefix) const {
  out.push_back({prefix + ".weight", weight});
  out.push_back({prefix + ".bias", bias});
}

Gru::Gru(int64_t in, int64_t hidden, Rng& rng)
    : input_gates(in, 3 * hidden, rng),
      hidden_gates(hidden, 3 * hidden, rng),
      hidden_(hidden) {}

Tensor Gru::last_state(const Tensor& x) const {
  const int64_t steps = x.dim(1);
  // All input projections at once: [3H, T].
  Tensor gx = input_gates(x);
  Tensor h = Tensor({hidden_}, 0.0);
  for (int64_t t = 0; t < steps; ++t) {
    Tensor xt = reshape(slice_cols(gx, t, 1), {3 * hidden_});
    Tensor gh = hidden_gates(h);
    Tensor xt_r = reshape(slice_rows(reshape(xt, {3 * hidden_, 1}), 0, hidden_), {hidden_});
    Tensor xt_z =
        reshape(slice_rows(reshape(xt, {3 * hidden_, 1}), hidden_, hidden_), {hidden_});
    Tensor xt_n =
        reshape(slice_rows(reshape(xt, {3 * hidden_, 1}), 2 * hidden_, hidden_), {hidden_});
    Tensor gh2 = reshape(gh, {3 * hidden_, 1});
    Tensor gh_r = reshape(slice_rows(gh2, 0, hidden_), {hidden_});
    Tensor gh_z = reshape(slice_rows(gh2, hidden_, hidden_), {hidden_});
    Tensor gh_n = reshape(slice_rows(gh2, 2 * hidden_, hidden_), {hidden_});
    Tensor r = sigmoid(add(xt_r, gh_r));
    Tensor z = sigmoid(add(xt_z, gh_z));
    Tensor n = tanh(add(xt_n, mul(r, gh_n)));
    // h' = (1 - z) * n + z * h
    h = add(n, mul(z, sub(h, n)));
  }
  return h;
}

void Gru::collect(NamedTensors& out, const std::string& prefix) const {
  input_gates.collect(out, prefix + ".input");
  hidden_gates.collect(out, prefix + ".hidden");
}

double squared_norm(const NamedTensors& params) {
  double s = 0.0;
  for (const auto& p : params) {
    for (double v : p.tensor.data()) s += v * v;
  }
  return s;
}

}  // namespace ascl::nn
