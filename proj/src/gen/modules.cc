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

#include "ascl/gen/modules.h"

#include <cmath>

#include "ascl/data/features.h"
#include "ascl/error.h"

namespace ascl::gen {

using nn::Tensor;

namespace {

constexpr double kDecoderSlope = 0.1;

nn::ConvOptions same_padding(int kernel) {
  nn::ConvOptions o;
  o.padding = kernel / 2;
  return o;
}

std::pair<Tensor, Tensor> split_stats(const Tensor& stats, int latent) {
  Tensor mean = nn::slice_rows(stats, 0, latent);
  Tensor log_std = nn::clamp(nn::slice_rows(stats, latent, latent), kLogStdMin, kLogStdMax);
  return {mean, log_std};
}

}  // namespace

void validate(const ModelConfig& c) {
  auto fail = [](const std::string& m) { throw Error(ErrorKind::kConfigError, m); };
  if (c.vocab_size < 2) fail("vocab_size must be at least 2");
  if (c.latent_channels <= 0) fail("latent_channels must be positive");
  if (c.latent_channels % 2 != 0) {
    throw Error(ErrorKind::kOddChannels, "latent_channels must be even for the coupling split");
  }
  if (c.hidden_channels <= 0 || c.flow_hidden <= 0 || c.duration_hidden <= 0) {
    fail("hidden sizes must be positive");
  }
  if (c.text_layers < 0 || c.flow_layers <= 0) fail("layer counts must be positive");
  if (c.flow_kernel <= 0 || c.flow_kernel % 2 == 0) fail("flow_kernel must be odd");
  if (c.decoder_stages != 1 && c.decoder_stages != 2 && c.decoder_stages != 4 &&
      c.decoder_stages != 8) {
    fail("decoder_stages must be 1, 2, 4 or 8 (256 = factor^stages)");
  }
  if (c.decoder_channels >> c.decoder_stages < 1) fail("decoder_channels too small for stages");
  if (c.segment_frames < 2) fail("segment_frames must be at least 2");
  if (!(c.noise_scale >= 0.0)) fail("noise_scale must be non-negative");
  if (c.max_token_frames < 1) fail("max_token_frames must be positive");
}

int upsample_factor(int stages) {
  int f = 1;
  while (true) {
    int p = 1;
    for (int i = 0; i < stages; ++i) p *= f;
    if (p == data::kHopSize) return f;
    if (p > data::kHopSize) break;
    ++f;
  }
  throw Error(ErrorKind::kConfigError, "no integer upsampling factor for " +
                                           std::to_string(stages) + " stages");
}

// --- TextEncoder -----------------------------------------------------------

TextEncoder::TextEncoder(const ModelConfig& c, Rng& rng) : latent_(c.latent_channels) {
  embedding = nn::init_uniform({c.vocab_size, c.hidden_channels}, 1, rng);
  for (int i = 0; i < c.text_layers; ++i) {
    layers.emplace_back(c.hidden_channels, c.hidden_channels, 5, rng, same_padding(5));
  }
  proj = nn::Conv1d(c.hidden_channels, 2 * c.latent_channels, 1, rng);
}

TextEncoding TextEncoder::operator()(std::span<const int> tokens) const {
  if (tokens.empty()) throw Error(ErrorKind::kEmptyText, "text_encode: no tokens");
  Tensor x = nn::embedding(embedding, tokens);
  for (const auto& layer : layers) x = nn::add(x, nn::relu(layer(x)));
  auto [mean, log_std] = split_stats(proj(x), latent_);
  return {x, {mean, log_std}};
}

void TextEncoder::collect(nn::NamedTensors& out, const std::string& prefix) const {
  out.push_back({prefix + ".embedding", embedding});
  for (size_t i = 0; i < layers.size(); ++i) {
    layers[i].collect(out, prefix + ".layers." + std::to_string(i));
  }
  proj.collect(out, prefix + ".proj");
}

// --- PosteriorEncoder ------------------------------------------------------

PosteriorEncoder::PosteriorEncoder(const ModelConfig& c, Rng& rng)
    : pre(data::kFreqBins, c.hidden_channels, 1, rng),
      conv_a(c.hidden_channels, c.hidden_channels, 5, rng, same_padding(5)),
      conv_b(c.hidden_channels, c.hidden_channels, 5, rng, same_padding(5)),
      proj(c.hidden_channels, 2 * c.latent_channels, 1, rng),
      latent_(c.latent_channels) {}

PosteriorStats PosteriorEncoder::stats(const Matrix& linear) const {
  if (linear.rows != data::kFreqBins) {
    throw Error(ErrorKind::kShapeMismatch, "posterior encoder expects 513 frequency bins");
  }
  std::vector<double> logmag(linear.data.size());
  for (size_t i = 0; i < logmag.size(); ++i) {
    logmag[i] = std::log(std::max(linear.data[i], data::kLogFloor));
  }
  Tensor x({linear.rows, linear.cols}, std::move(logmag));
  Tensor h = pre(x);
  h = nn::add(h, nn::relu(conv_a(h)));
  h = nn::add(h, nn::relu(conv_b(h)));
  auto [mean, log_std] = split_stats(proj(h), latent_);
  return {mean, log_std};
}

PosteriorSample PosteriorEncoder::operator()(const Matrix& linear, Rng& rng) const {
  PosteriorSample out;
  out.stats = stats(linear);
  out.noise.resize(out.stats.mean.numel());
  for (double& e : out.noise) e = rng.normal();
  Tensor eps(out.stats.mean.shape(), out.noise);
  out.z_v.frames = nn::add(out.stats.mean, nn::mul(nn::exp(out.stats.log_std), eps));
  out.z_v.role = LatentRole::kZv;
  return out;
}

void PosteriorEncoder::collect(nn::NamedTensors& out, const std::string& prefix) const {
  pre.collect(out, prefix + ".pre");
  conv_a.collect(out, prefix + ".conv_a");
  conv_b.collect(out, prefix + ".conv_b");
  proj.collect(out, prefix + ".proj");
}

// --- Flow ------------------------------------------------------------------

CouplingLayer::CouplingLayer(const ModelConfig& c, Rng& rng)
    : pre(c.latent_channels / 2, c.flow_hidden, 1, rng),
      cond(speaker::kSpeakerEmbeddingDim, c.flow_hidden, rng),
      conv_a(c.flow_hidden, c.flow_hidden, c.flow_kernel, rng, same_padding(c.flow_kernel)),
      conv_b(c.flow_hidden, c.flow_hidden, c.flow_kernel, rng, same_padding(c.flow_kernel)),
      post(c.flow_hidden, c.latent_channels, 1, rng),
      half_(c.latent_channels / 2) {
  post.zero_init();
}

std::pair<Tensor, Tensor> CouplingLayer::shift_and_log_scale(const Tensor& half,
                                                             const Tensor& g) const {
  Tensor h = nn::add_channel(pre(half), cond(g));
  h = nn::relu(conv_a(h));
  h = nn::add(h, nn::relu(conv_b(h)));
  Tensor stats = post(h);
  return {nn::slice_rows(stats, 0, half_), nn::slice_rows(stats, half_, half_)};
}

Tensor CouplingLayer::forward(const Tensor& z, const Tensor& g, Tensor& log_det) const {
  Tensor x0 = nn::slice_rows(z, 0, half_);
  Tensor x1 = nn::slice_rows(z, half_, half_);
  auto [shift, log_scale] = shift_and_log_scale(x0, g);
  Tensor y1 = nn::add(shift, nn::mul(x1, nn::exp(log_scale)));
  log_det = nn::add(log_det, nn::sum(log_scale));
  return nn::concat_rows(x0, y1);
}

Tensor CouplingLayer::inverse(const Tensor& z, const Tensor& g) const {
  Tensor y0 = nn::slice_rows(z, 0, half_);
  Tensor y1 = nn::slice_rows(z, half_, half_);
  auto [shift, log_scale] = shift_and_log_scale(y0, g);
  Tensor x1 = nn::mul(nn::sub(y1, shift), nn::exp(nn::scale(log_scale, -1.0)));
  return nn::concat_rows(y0, x1);
}

void CouplingLayer::collect(nn::NamedTensors& out, const std::string& prefix) const {
  pre.collect(out, prefix + ".pre");
  cond.collect(out, prefix + ".cond");
  conv_a.collect(out, prefix + ".conv_a");
  conv_b.collect(out, prefix + ".conv_b");
  post.collect(out, prefix + ".post");
}

CouplingFlow::CouplingFlow(const ModelConfig& c, Rng& rng) {
  if (c.latent_channels % 2 != 0) {
    throw Error(ErrorKind::kOddChannels, "flow needs an even channel count");
  }
  for (int i = 0; i < c.flow_layers; ++i) layers.emplace_back(c, rng);
}

FlowOutput CouplingFlow::forward(const LatentSequence& z_v,
                                 const speaker::SpeakerEmbedding& g) const {
  if (z_v.channels() % 2 != 0) {
    throw Error(ErrorKind::kOddChannels, "flow_forward on " + std::to_string(z_v.channels()) +
                                             " channels");
  }
  Tensor z = z_v.frames;
  Tensor log_det = Tensor::scalar(0.0);
  for (const auto& layer : layers) {
    z = layer.forward(z, g.tensor(), log_det);
    z = nn::flip_rows(z);
  }
  return {{z, LatentRole::kZf}, log_det};
}

LatentSequence CouplingFlow::inverse(const LatentSequence& z_f,
                                     const speaker::SpeakerEmbedding& g) const {
  if (z_f.channels() % 2 != 0) {
    throw Error(ErrorKind::kOddChannels, "flow_inverse on " + std::to_string(z_f.channels()) +
                                             " channels");
  }
  Tensor z = z_f.frames;
  for (auto it = layers.rbegin(); it != layers.rend(); ++it) {
    z = nn::flip_rows(z);
    z = it->inverse(z, g.tensor());
  }
  return {z, LatentRole::kZv};
}

void CouplingFlow::collect(nn::NamedTensors& out, const std::string& prefix) const {
  for (size_t i = 0; i < layers.size(); ++i) {
    layers[i].collect(out, prefix + ".layers." + std::to_string(i));
  }
}

// --- Decoder ---------------------------------------------------------------

Decoder::Decoder(const ModelConfig& c, Rng& rng) {
  const int factor = upsample_factor(c.decoder_stages);
  pre = nn::Conv1d(c.latent_channels, c.decoder_channels, 7, rng, same_padding(7));
  int ch = c.decoder_channels;
  for (int i = 0; i < c.decoder_stages; ++i) {
    const int next = ch / 2;
    ups.emplace_back(ch, next, 2 * factor, factor, factor / 2, rng);
    res.emplace_back(next, next, 3, rng, same_padding(3));
    ch = next;
  }
  post = nn::Conv1d(ch, 1, 7, rng, same_padding(7));
}

Tensor Decoder::operator()(const Tensor& z_v) const {
  Tensor x = pre(z_v);
  for (size_t i = 0; i < ups.size(); ++i) {
    x = ups[i](nn::leaky_relu(x, kDecoderSlope));
    x = nn::add(x, res[i](nn::leaky_relu(x, kDecoderSlope)));
  }
  x = nn::tanh(post(nn::leaky_relu(x, kDecoderSlope)));
  return nn::reshape(x, {x.numel()});
}

void Decoder::collect(nn::NamedTensors& out, const std::string& prefix) const {
  pre.collect(out, prefix + ".pre");
  for (size_t i = 0; i < ups.size(); ++i) {
    ups[i].collect(out, prefix + ".ups." + std::to_string(i));
    res[i].collect(out, prefix + ".res." + std::to_string(i));
  }
  post.collect(out, prefix + ".post");
}

// --- DurationPredictor -----------------------------------------------------

DurationPredictor::DurationPredictor(const ModelConfig& c, Rng& rng)
    : cond_speaker(speaker::kSpeakerEmbeddingDim, c.hidden_channels, rng),
      cond_reference(speaker::kSpeakerEmbeddingDim, c.hidden_channels, rng),
      conv_a(c.hidden_channels, c.duration_hidden, 3, rng, same_padding(3)),
      conv_b(c.duration_hidden, c.duration_hidden, 3, rng, same_padding(3)),
      proj(c.duration_hidden, 1, 1, rng) {}

Tensor DurationPredictor::log_durations(const Tensor& text_hidden,
                                        const speaker::SpeakerEmbedding& g,
                                        const speaker::ReferenceEmbedding& g_d) const {
  // Duration training must not reshape the text encoder or the speaker head.
  Tensor x = text_hidden.detach();
  Tensor cond = nn::add(cond_speaker(g.tensor().detach()), cond_reference(g_d.tensor()));
  x = nn::add_channel(x, cond);
  x = nn::relu(conv_a(x));
  x = nn::relu(conv_b(x));
  Tensor out = proj(x);
  return nn::reshape(out, {out.numel()});
}

void DurationPredictor::collect(nn::NamedTensors& out, const std::string& prefix) const {
  cond_speaker.collect(out, prefix + ".cond_speaker");
  cond_reference.collect(out, prefix + ".cond_reference");
  conv_a.collect(out, prefix + ".conv_a");
  conv_b.collect(out, prefix + ".conv_b");
  proj.collect(out, prefix + ".proj");
}

}  // namespace ascl::gen
