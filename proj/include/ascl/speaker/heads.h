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

#ifndef ASCL_SPEAKER_HEADS_H_
#define ASCL_SPEAKER_HEADS_H_

#include <string>

#include "ascl/matrix.h"
#include "ascl/nn/layers.h"
#include "ascl/speaker/speaker_encoder.h"

namespace ascl::speaker {

// g in R^256 (g_s for the support speaker, g_q for the query speaker).
class SpeakerEmbedding {
 public:
  SpeakerEmbedding() = default;
  explicit SpeakerEmbedding(nn::Tensor g);
  const nn::Tensor& tensor() const { return g_; }
  SpeakerEmbedding detached() const { return SpeakerEmbedding(g_.detach()); }

 private:
  nn::Tensor g_;
};

// Utterance-level reference embedding g_d in R^256 for duration conditioning.
class ReferenceEmbedding {
 public:
  ReferenceEmbedding() = default;
  explicit ReferenceEmbedding(nn::Tensor g_d);
  const nn::Tensor& tensor() const { return g_d_; }

 private:
  nn::Tensor g_d_;
};

// Trainable 512 -> 256 head on top of the frozen encoder:
// g = W2 relu(W1 raw + b1) + b2.
class ProjectionHead {
 public:
  ProjectionHead() = default;
  explicit ProjectionHead(Rng& rng);

  SpeakerEmbedding operator()(const RawSpeakerEmbedding& raw) const;
  void collect(nn::NamedTensors& out, const std::string& prefix) const;

  nn::Linear reduce;   // 512 -> 256
  nn::Linear project;  // 256 -> 256
};

// Reduced global-style-token reference encoder: three stride-2 3x3
// convolutions over the [80 x T] log-mel image, a GRU across time and a
// linear map to 256.
class ReferenceEncoder {
 public:
  static constexpr int kChannels[3] = {8, 16, 32};
  static constexpr int kGruHidden = 128;

  ReferenceEncoder() = default;
  explicit ReferenceEncoder(Rng& rng);

  ReferenceEmbedding operator()(const Matrix& mel) const;
  void collect(nn::NamedTensors& out, const std::string& prefix) const;

  nn::Conv2d conv[3];
  nn::Gru gru;
  nn::Linear out;
};

}  // namespace ascl::speaker

#endif  // ASCL_SPEAKER_HEADS_H_
