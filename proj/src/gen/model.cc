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


#include "ascl/gen/model.h"

#include <algorithm>
#include <cmath>

#include "ascl/data/features.h"
#include "ascl/error.h"
#include "ascl/gen/mas.h"
#include "ascl/nn/ops.h"

namespace ascl::gen {

VitsModel::VitsModel(const ModelConfig& config, Rng& rng) : config_(config) {
  validate(config_);
  head = speaker::ProjectionHead(rng);
  reference = speaker::ReferenceEncoder(rng);
  text = TextEncoder(config_, rng);
  posterior = PosteriorEncoder(config_, rng);
  flow = CouplingFlow(config_, rng);
  decoder = Decoder(config_, rng);
  duration = DurationPredictor(config_, rng);
}

nn::NamedTensors VitsModel::parameters() const {
  nn::NamedTensors out;
  head.collect(out, "head");
  reference.collect(out, "reference");
  text.collect(out, "text");
  posterior.collect(out, "posterior");
  flow.collect(out, "flow");
  decoder.collect(out, "decoder");
  duration.collect(out, "duration");
  return out;
}

nn::Tensor VitsModel::generate_query(const LatentSequence& z_v_s,
                                     const speaker::SpeakerEmbedding& g_s,
                                     const speaker::SpeakerEmbedding& g_q) const {
  FlowOutput f = flow.forward(z_v_s, g_s);
  return decoder(flow.inverse(f.z, g_q).frames);
}

Durations durations_from_log(const nn::Tensor& log_durations, int max_frames) {
  Durations d;
  d.frames.reserve(log_durations.numel());
  for (double v : log_durations.data()) {
    double frames = std::ceil(std::exp(std::min(v, 30.0)));
    if (!std::isfinite(frames)) frames = max_frames;
    d.frames.push_back(std::clamp<int64_t>(static_cast<int64_t>(frames), 1, max_frames));
  }
  return d;
}

Synthesis VitsModel::synthesize(std::span<const int> tokens,
                                const data::Waveform& reference_audio,
                                const speaker::SpeakerEncoder& encoder, Rng& rng,
                                std::optional<double> noise_scale) const {
  if (trained_steps <= 0) {
    throw Error(ErrorKind::kUntrainedModel, "model has no completed training steps");
  }
  if (tokens.empty()) throw Error(ErrorKind::kEmptyText, "nothing to synthesize");
  const double ns = noise_scale.value_or(config_.noise_scale);
  nn::NoGradGuard no_grad;

  const Matrix mel = data::log_mel(reference_audio);
  const speaker::SpeakerEmbedding g = head(encoder.embed(mel));
  const speaker::ReferenceEmbedding g_d = reference(mel);

  const TextEncoding enc = text(tokens);
  Synthesis out;
  out.durations = durations_from_log(duration.log_durations(enc.hidden, g, g_d),
                                     config_.max_token_frames);
  const PriorStats prior = expand_prior(enc.prior, alignment_from_durations(out.durations));

  std::vector<double> eps(prior.mean.numel());
  for (double& e : eps) e = ns * rng.normal();
  nn::Tensor z = nn::add(prior.mean,
                         nn::mul(nn::exp(prior.log_std), nn::Tensor(prior.mean.shape(), eps)));
  const LatentSequence z_v = flow.inverse({z, LatentRole::kZf}, g);
  const nn::Tensor wave = decoder(z_v.frames);
  out.wave.assign(wave.data().begin(), wave.data().end());
  return out;
}

}  // namespace ascl::gen
