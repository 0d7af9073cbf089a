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

#ifndef ASCL_GEN_MODULES_H_
#define ASCL_GEN_MODULES_H_

#include <span>
#include <string>
#include <vector>

#include "ascl/gen/config.h"
#include "ascl/gen/types.h"
#include "ascl/matrix.h"
#include "ascl/nn/layers.h"
#include "ascl/rng.h"
#include "ascl/speaker/heads.h"

namespace ascl::gen {

// Token embedding followed by residual width-5 convolutions; a 1x1
// projection gives the per-token prior mean and clamped log-std.
class TextEncoder {
 public:
  TextEncoder() = default;
  TextEncoder(const ModelConfig& config, Rng& rng);

  TextEncoding operator()(std::span<const int> tokens) const;
  void collect(nn::NamedTensors& out, const std::string& prefix) const;

  nn::Tensor embedding;  // [vocab, H]
  std::vector<nn::Conv1d> layers;
  nn::Conv1d proj;

 private:
  int latent_ = 0;
};

// q(z_v | y) from the log linear spectrogram.
class PosteriorEncoder {
 public:
  PosteriorEncoder() = default;
  PosteriorEncoder(const ModelConfig& config, Rng& rng);

  PosteriorStats stats(const Matrix& linear) const;
  // z_v = mean + exp(log_std) * eps with eps drawn from rng.
  PosteriorSample operator()(const Matrix& linear, Rng& rng) const;
  void collect(nn::NamedTensors& out, const std::string& prefix) const;

  nn::Conv1d pre;
  nn::Conv1d conv_a;
  nn::Conv1d conv_b;
  nn::Conv1d proj;

 private:
  int latent_ = 0;
};

// Affine coupling: the first half of the channels (plus the speaker
// embedding, added after a linear projection) parameterizes a shift and
// log-scale for the second half. The output layer starts at zero, so a
// fresh layer is the identity.
class CouplingLayer {
 public:
  CouplingLayer() = default;
  CouplingLayer(const ModelConfig& config, Rng& rng);

  nn::Tensor forward(const nn::Tensor& z, const nn::Tensor& g, nn::Tensor& log_det) const;
  nn::Tensor inverse(const nn::Tensor& z, const nn::Tensor& g) const;
  void collect(nn::NamedTensors& out, const std::string& prefix) const;

  nn::Conv1d pre;
  nn::Linear cond;
  nn::Conv1d conv_a;
  nn::Conv1d conv_b;
  nn::Conv1d post;

 private:
  std::pair<nn::Tensor, nn::Tensor> shift_and_log_scale(const nn::Tensor& half,
                                                        const nn::Tensor& g) const;
  int half_ = 0;
};

// K coupling layers with a channel flip after each one.
class CouplingFlow {
 public:
  CouplingFlow() = default;
  CouplingFlow(const ModelConfig& config, Rng& rng);

  // z_f = f(z_v, g). Throws OddChannels for odd D.
  FlowOutput forward(const LatentSequence& z_v, const speaker::SpeakerEmbedding& g) const;
  // z_v = f^-1(z_f, g), layer by layer in reverse.
  LatentSequence inverse(const LatentSequence& z_f, const speaker::SpeakerEmbedding& g) const;
  void collect(nn::NamedTensors& out, const std::string& prefix) const;

  std::vector<CouplingLayer> layers;
};

// Transposed-convolution upsampler from latent frames to waveform samples,
// 256 samples per frame, tanh output.
class Decoder {
 public:
  Decoder() = default;
  Decoder(const ModelConfig& config, Rng& rng);

  // [D x T] -> [256 * T]
  nn::Tensor operator()(const nn::Tensor& z_v) const;
  void collect(nn::NamedTensors& out, const std::string& prefix) const;

  nn::Conv1d pre;
  std::vector<nn::ConvTranspose1d> ups;
  std::vector<nn::Conv1d> res;
  nn::Conv1d post;
};

// Log-duration per token from the (detached) text hidden states, with the
// detached speaker embedding and the reference embedding broadcast-added.
class DurationPredictor {
 public:
  DurationPredictor() = default;
  DurationPredictor(const ModelConfig& config, Rng& rng);

  nn::Tensor log_durations(const nn::Tensor& text_hidden, const speaker::SpeakerEmbedding& g,
                           const speaker::ReferenceEmbedding& g_d) const;
  void collect(nn::NamedTensors& out, const std::string& prefix) const;

  nn::Linear cond_speaker;
  nn::Linear cond_reference;
  nn::Conv1d conv_a;
  nn::Conv1d conv_b;
  nn::Conv1d proj;
};

int upsample_factor(int stages);

}  // namespace ascl::gen

#endif  // ASCL_GEN_MODULES_H_
