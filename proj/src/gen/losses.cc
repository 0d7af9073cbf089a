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


#include "ascl/gen/losses.h"

#include <cmath>
#include <string>

#include "ascl/data/features.h"
#include "ascl/error.h"
#include "ascl/nn/ops.h"

namespace ascl::gen {

using nn::Tensor;

namespace {

void require_same(const nn::Shape& a, const nn::Shape& b, const char* what) {
  if (a != b) {
    throw Error(ErrorKind::kShapeMismatch, std::string(what) + ": " + nn::shape_str(a) +
                                               " vs " + nn::shape_str(b));
  }
}

}  // namespace

Tensor kl_loss(const PosteriorSample& posterior, const PriorStats& prior, const FlowOutput& flow) {
  const auto& shape = posterior.stats.mean.shape();
  require_same(shape, prior.mean.shape(), "kl posterior/prior");
  require_same(shape, flow.z.frames.shape(), "kl posterior/flow");
  require_same(shape, posterior.z_v.frames.shape(), "kl posterior/sample");
  if (static_cast<int64_t>(posterior.noise.size()) != posterior.stats.mean.numel()) {
    throw Error(ErrorKind::kShapeMismatch, "kl: noise size differs from posterior");
  }
  double half_eps_sq = 0.0;
  for (double e : posterior.noise) half_eps_sq += 0.5 * e * e;

  // log q = sum(-log_std_q - eps^2/2)
  Tensor log_q = nn::add_scalar(nn::scale(nn::sum(posterior.stats.log_std), -1.0), -half_eps_sq);
  Tensor diff = nn::mul(nn::sub(flow.z.frames, prior.mean), nn::exp(nn::scale(prior.log_std, -1.0)));
  // log p = sum(-log_std_p - diff^2/2)
  Tensor log_p = nn::scale(nn::add(nn::sum(prior.log_std), nn::scale(nn::sum(nn::square(diff)), 0.5)),
                           -1.0);
  Tensor kl = nn::sub(nn::sub(log_q, log_p), flow.log_det);
  return nn::scale(kl, 1.0 / static_cast<double>(shape[1]));
}

Tensor recon_loss(const Tensor& wave, const Tensor& mel_target) {
  Tensor mel = data::log_mel_tensor(wave);
  require_same(mel.shape(), mel_target.shape(), "recon mel");
  return nn::l1_loss(mel, mel_target);
}

Tensor duration_loss(const Tensor& log_durations, const Durations& target) {
  if (log_durations.numel() != static_cast<int64_t>(target.frames.size())) {
    throw Error(ErrorKind::kShapeMismatch, "duration prediction length differs from target");
  }
  std::vector<double> log_target(target.frames.size());
  for (size_t i = 0; i < log_target.size(); ++i) {
    log_target[i] = std::log(static_cast<double>(target.frames[i]));
  }
  const auto n = static_cast<int64_t>(log_target.size());
  return nn::mse_loss(nn::reshape(log_durations, {n}), Tensor({n}, std::move(log_target)));
}

}  // namespace ascl::gen
