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


#include "ascl/consistency/discriminator.h"

#include <string>

#include "ascl/error.h"
#include "ascl/nn/ops.h"

namespace ascl::consistency {

using nn::Tensor;

void validate(const DiscriminatorConfig& c) {
  if (c.channels.size() != kNumLayers || c.groups.size() != kNumLayers) {
    throw Error(ErrorKind::kConfigError, "discriminator needs six channel and group entries");
  }
  int in = 1;
  for (int i = 0; i < kNumLayers; ++i) {
    const int out = c.channels[i];
    const int g = c.groups[i];
    if (out <= 0 || g <= 0 || in % g != 0 || out % g != 0) {
      throw Error(ErrorKind::kConfigError, "discriminator layer " + std::to_string(i) +
                                               ": groups must divide both channel counts");
    }
    in = out;
  }
}

int64_t score_map_length(int64_t length) {
  for (int i = 0; i < kNumLayers; ++i) {
    if (length <= 0) return 0;
    const int64_t span = length + 2 * kPadding - kKernel;
    if (span < 0) return 0;
    length = span / kStride + 1;
  }
  return length;
}

SpeakerConsistencyDiscriminator::SpeakerConsistencyDiscriminator(const DiscriminatorConfig& c,
                                                                 Rng& rng) {
  validate(c);
  int in = 1;
  for (int i = 0; i < kNumLayers; ++i) {
    cond.emplace_back(speaker::kSpeakerEmbeddingDim, in, rng);
    nn::ConvOptions opt;
    opt.stride = kStride;
    opt.padding = kPadding;
    opt.groups = c.groups[i];
    convs.emplace_back(in, c.channels[i], kKernel, rng, opt);
    in = c.channels[i];
  }
  nn::ConvOptions post_opt;
  post_opt.padding = kPostKernel / 2;
  post = nn::Conv1d(in, 1, kPostKernel, rng, post_opt);
}

Tensor SpeakerConsistencyDiscriminator::operator()(const Tensor& wave,
                                                   const speaker::SpeakerEmbedding& g) const {
  const int64_t length = wave.numel();
  if (length < kMinInputLength) {
    throw Error(ErrorKind::kTooShort, "discriminator needs >= 64 samples, got " +
                                          std::to_string(length));
  }
  Tensor x = nn::reshape(wave, {1, length});
  for (size_t i = 0; i < convs.size(); ++i) {
    x = nn::add_channel(x, cond[i](g.tensor()));
    x = nn::leaky_relu(convs[i](x), kLeakySlope);
  }
  x = post(x);
  return nn::reshape(x, {x.numel()});
}

void SpeakerConsistencyDiscriminator::collect(nn::NamedTensors& out,
                                              const std::string& prefix) const {
  for (size_t i = 0; i < convs.size(); ++i) {
    cond[i].collect(out, prefix + ".cond." + std::to_string(i));
    convs[i].collect(out, prefix + ".convs." + std::to_string(i));
  }
  post.collect(out, prefix + ".post");
}

nn::NamedTensors SpeakerConsistencyDiscriminator::parameters() const {
  nn::NamedTensors out;
  collect(out, "discriminator");
  return out;
}

namespace {

Tensor mean_sq_from(const Tensor& s, double target) {
  return nn::mean(nn::square(nn::add_scalar(s, -target)));
}

}  // namespace

Tensor ascl_discriminator_loss(const Tensor& real_q, const Tensor& real_s, const Tensor& fake_q,
                               const Tensor& fake_s, double alpha) {
  Tensor query = nn::add(mean_sq_from(real_q, 1.0), mean_sq_from(fake_q, 0.0));
  Tensor support = nn::add(mean_sq_from(real_s, 1.0), mean_sq_from(fake_s, 0.0));
  return nn::add(nn::scale(query, alpha), support);
}

Tensor ascl_generator_loss(const Tensor& fake_q, const Tensor& fake_s, double alpha) {
  return nn::add(nn::scale(mean_sq_from(fake_q, 1.0), alpha), mean_sq_from(fake_s, 1.0));
}

gen::LatentSequence stop_gradient(const gen::LatentSequence& z) {
  return {z.frames.detach(), z.role};
}

}  // namespace ascl::consistency
