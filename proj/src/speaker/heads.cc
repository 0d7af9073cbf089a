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

#include "ascl/speaker/heads.h"

#include <cmath>

#include "ascl/data/features.h"
#include "ascl/error.h"

namespace ascl::speaker {

namespace {

void check_finite_dim(const nn::Tensor& t, const char* what) {
  if (!t.defined() || t.numel() != kSpeakerEmbeddingDim) {
    throw Error(ErrorKind::kShapeMismatch, std::string(what) + " must have 256 dims");
  }
  for (double v : t.data()) {
    if (!std::isfinite(v)) throw Error(ErrorKind::kNonFiniteLoss, std::string("non-finite ") + what);
  }
}

int64_t halved(int64_t n) { return (n - 1) / 2 + 1; }  // k=3, s=2, p=1

}  // namespace

SpeakerEmbedding::SpeakerEmbedding(nn::Tensor g) : g_(std::move(g)) {
  check_finite_dim(g_, "speaker embedding");
}

ReferenceEmbedding::ReferenceEmbedding(nn::Tensor g_d) : g_d_(std::move(g_d)) {
  check_finite_dim(g_d_, "reference embedding");
}

ProjectionHead::ProjectionHead(Rng& rng)
    : reduce(kRawEmbeddingDim, kSpeakerEmbeddingDim, rng),
      project(kSpeakerEmbeddingDim, kSpeakerEmbeddingDim, rng) {}

SpeakerEmbedding ProjectionHead::operator()(const RawSpeakerEmbedding& raw) const {
  nn::Tensor x({kRawEmbeddingDim}, raw.values());
  return SpeakerEmbedding(project(nn::relu(reduce(x))));
}

void ProjectionHead::collect(nn::NamedTensors& out, const std::string& prefix) const {
  reduce.collect(out, prefix + ".reduce");
  project.collect(out, prefix + ".project");
}

ReferenceEncoder::ReferenceEncoder(Rng& rng) {
  int in = 1;
  for (int i = 0; i < 3; ++i) {
    conv[i] = nn::Conv2d(in, kChannels[i], 3, 2, 1, rng);
    in = kChannels[i];
  }
  int64_t freq = data::kMelBins;
  for (int i = 0; i < 3; ++i) freq = halved(freq);
  gru = nn::Gru(kChannels[2] * freq, kGruHidden, rng);
  out = nn::Linear(kGruHidden, kSpeakerEmbeddingDim, rng);
}

ReferenceEmbedding ReferenceEncoder::operator()(const Matrix& mel) const {
  if (mel.rows != data::kMelBins) {
    throw Error(ErrorKind::kShapeMismatch, "reference encoder expects 80 mel bins");
  }
  if (mel.cols < kMinFrames) {
    throw Error(ErrorKind::kTooShort, "reference encoder needs >= 4 frames, got " +
                                          std::to_string(mel.cols));
  }
  // Frequency is the image height, time the width, so the conv output
  // [C, F', T'] reshapes straight into GRU inputs [C*F', T'].
  nn::Tensor x({1, mel.rows, mel.cols}, mel.data);
  for (const auto& c : conv) x = nn::relu(c(x));
  const int64_t feat = x.dim(0) * x.dim(1);
  const int64_t steps = x.dim(2);
  x = nn::reshape(x, {feat, steps});
  return ReferenceEmbedding(out(gru.last_state(x)));
}

void ReferenceEncoder::collect(nn::NamedTensors& out_params, const std::string& prefix) const {
  for (int i = 0; i < 3; ++i) conv[i].collect(out_params, prefix + ".conv" + std::to_string(i));
  gru.collect(out_params, prefix + ".gru");
  out.collect(out_params, prefix + ".out");
}

}  // namespace ascl::speaker
