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


#ifndef ASCL_GEN_MODEL_H_
#define ASCL_GEN_MODEL_H_

#include <cstdint>
#include <optional>
#include <span>

#include "ascl/data/audio.h"
#include "ascl/gen/config.h"
#include "ascl/gen/modules.h"
#include "ascl/gen/types.h"
#include "ascl/nn/layers.h"
#include "ascl/rng.h"
#include "ascl/speaker/heads.h"
#include "ascl/speaker/speaker_encoder.h"

namespace ascl::gen {

struct Synthesis {
  data::Waveform wave;
  Durations durations;
};

// The generator G_theta: every trainable module apart from the
// discriminator. The frozen speaker encoder is passed in, never owned.
class VitsModel {
 public:
  VitsModel() = default;
  VitsModel(const ModelConfig& config, Rng& rng);

  const ModelConfig& config() const { return config_; }

  // Keys: head.*, reference.*, text.*, posterior.*, flow.*, decoder.*, duration.*
  nn::NamedTensors parameters() const;

  speaker::SpeakerEmbedding speaker_embedding(const speaker::RawSpeakerEmbedding& raw) const {
    return head(raw);
  }

  // Dec(f^-1(f(z_v_s, g_s), g_q)).
  nn::Tensor generate_query(const LatentSequence& z_v_s, const speaker::SpeakerEmbedding& g_s,
                            const speaker::SpeakerEmbedding& g_q) const;

  // Text plus one reference utterance to audio. noise_scale defaults to the
  // configured value. Throws UntrainedModel before any training step and
  // EmptyText for an empty token list.
  Synthesis synthesize(std::span<const int> tokens, const data::Waveform& reference_audio,
                       const speaker::SpeakerEncoder& encoder, Rng& rng,
                       std::optional<double> noise_scale = std::nullopt) const;

  // Count of completed optimizer steps; zero means untrained.
  int64_t trained_steps = 0;

  speaker::ProjectionHead head;
  speaker::ReferenceEncoder reference;
  TextEncoder text;
  PosteriorEncoder posterior;
  CouplingFlow flow;
  Decoder decoder;
  DurationPredictor duration;

 private:
  ModelConfig config_;
};

// Inference-time frame counts: ceil(exp(log_d)) clamped to [1, cap].
Durations durations_from_log(const nn::Tensor& log_durations, int max_frames);

}  // namespace ascl::gen

#endif  // ASCL_GEN_MODEL_H_
