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


#ifndef ASCL_CONSISTENCY_DISCRIMINATOR_H_
#define ASCL_CONSISTENCY_DISCRIMINATOR_H_

#include <cstdint>
#include <string>
#include <vector>

#include "ascl/gen/types.h"
#include "ascl/nn/layers.h"
#include "ascl/rng.h"
#include "ascl/speaker/heads.h"

namespace ascl::consistency {

inline constexpr int kNumLayers = 6;
inline constexpr int kKernel = 4;
inline constexpr int kStride = 2;
inline constexpr int kPadding = 1;
inline constexpr int kPostKernel = 3;
inline constexpr double kLeakySlope = 0.1;
// Shortest waveform that survives all six stride-2 layers.
inline constexpr int64_t kMinInputLength = 64;
inline constexpr double kDefaultAlpha = 0.3;

struct DiscriminatorConfig {
  std::vector<int> channels = {16, 64, 128, 256, 256, 256};
  std::vector<int> groups = {1, 4, 4, 8, 8, 8};
};

// Throws ConfigError when channel and group plans do not fit together.
void validate(const DiscriminatorConfig& config);

// Each layer maps L -> floor((L + 2*1 - 4) / 2) + 1; the post conv keeps the
// length. Returns 0 when the input is too short.
int64_t score_map_length(int64_t input_length);

// D_omega(y, g): six strided grouped convolutions with a per-layer linear
// projection of g added to the layer input, leaky ReLU after each, and a
// width-3 post convolution to a single score channel.
class SpeakerConsistencyDiscriminator {
 public:
  SpeakerConsistencyDiscriminator() = default;
  SpeakerConsistencyDiscriminator(const DiscriminatorConfig& config, Rng& rng);

  // wave [L] with L >= 64 -> score map [score_map_length(L)].
  nn::Tensor operator()(const nn::Tensor& wave, const speaker::SpeakerEmbedding& g) const;
  void collect(nn::NamedTensors& out, const std::string& prefix) const;
  nn::NamedTensors parameters() const;

  std::vector<nn::Linear> cond;
  std::vector<nn::Conv1d> convs;
  nn::Conv1d post;
};

// LS-GAN discriminator objective; each squared term is averaged
// over its score map:
//   alpha * mean((real_q - 1)^2) + mean((real_s - 1)^2) + alpha * mean(fake_q^2) + mean(fake_s^2).
nn::Tensor ascl_discriminator_loss(const nn::Tensor& real_q, const nn::Tensor& real_s,
                                   const nn::Tensor& fake_q, const nn::Tensor& fake_s,
                                   double alpha = kDefaultAlpha);

// alpha * mean((fake_q - 1)^2) + mean((fake_s - 1)^2).
nn::Tensor ascl_generator_loss(const nn::Tensor& fake_q, const nn::Tensor& fake_s,
                               double alpha = kDefaultAlpha);

// Same values, no gradient path back to the producers of z.
gen::LatentSequence stop_gradient(const gen::LatentSequence& z);

}  // namespace ascl::consistency

#endif  // ASCL_CONSISTENCY_DISCRIMINATOR_H_
