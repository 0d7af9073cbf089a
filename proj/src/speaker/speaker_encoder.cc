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

#include "ascl/speaker/speaker_encoder.h"

#include <Eigen/Core>
#include <cmath>
#include <cstdlib>
#include <json.hpp>

#include "ascl/data/features.h"
#include "ascl/error.h"
#include "ascl/rng.h"

#ifndef ASCL_ASSET_DIR
#define ASCL_ASSET_DIR "assets"
#endif

namespace ascl::speaker {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr double kInputScale = 0.25;

io::ArchiveTensor uniform_tensor(std::vector<int64_t> shape, double bound, Rng& rng) {
  io::ArchiveTensor t;
  int64_t n = 1;
  for (int64_t d : shape) n *= d;
  t.shape = std::move(shape);
  t.values.resize(n);
  for (double& v : t.values) v = rng.uniform(-bound, bound);
  return t;
}

void check_shape(const std::map<std::string, io::ArchiveTensor>& params, const std::string& name,
                 const std::vector<int64_t>& shape) {
  const auto it = params.find(name);
  if (it == params.end() || it->second.shape != shape) {
    throw Error(ErrorKind::kCheckpointError, "speaker encoder tensor '" + name + "' missing or misshapen");
  }
}

}  // namespace

RawSpeakerEmbedding::RawSpeakerEmbedding(std::vector<double> values)
    : values_(std::move(values)) {
  if (values_.size() != kRawEmbeddingDim) {
    throw Error(ErrorKind::kShapeMismatch,
                "raw speaker embedding has " + std::to_string(values_.size()) + " dims, want 512");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(ErrorKind::kNonFiniteLoss, "non-finite speaker embedding");
  }
}

RawSpeakerEmbedding FunctionSpeakerEncoder::embed(const Matrix& mel) const {
  if (mel.cols < kMinFrames) {
    throw Error(ErrorKind::kTooShort, "speaker encoder needs >= 4 frames, got " +
                                          std::to_string(mel.cols));
  }
  return RawSpeakerEmbedding(fn_(mel));
}

StandInSpeakerEncoder StandInSpeakerEncoder::generate(uint64_t seed) {
  Rng rng(seed);
  std::map<std::string, io::ArchiveTensor> params;
  const double b1 = 1.0 / std::sqrt(static_cast<double>(data::kMelBins * kKernel));
  params["conv.weight"] = uniform_tensor({kHidden, data::kMelBins, kKernel}, b1, rng);
  params["conv.bias"] = uniform_tensor({kHidden}, b1, rng);
  params["out.weight"] =
      uniform_tensor({kRawEmbeddingDim, kHidden}, 1.0 / std::sqrt(static_cast<double>(kHidden)), rng);
  return from_tensors(std::move(params));
}

StandInSpeakerEncoder StandInSpeakerEncoder::from_tensors(
    std::map<std::string, io::ArchiveTensor> tensors) {
  check_shape(tensors, "conv.weight", {kHidden, data::kMelBins, kKernel});
  check_shape(tensors, "conv.bias", {kHidden});
  check_shape(tensors, "out.weight", {kRawEmbeddingDim, kHidden});
  StandInSpeakerEncoder enc;
  enc.params_ = std::move(tensors);
  return enc;
}

StandInSpeakerEncoder StandInSpeakerEncoder::load(const std::filesystem::path& path) {
  io::Archive ar = io::read_archive(path);
  const auto meta = nlohmann::json::parse(ar.metadata_json, nullptr, false);
  if (meta.is_discarded() || meta.value("type", "") != "stand-in-speaker-encoder") {
    throw Error(ErrorKind::kCheckpointError, path.string() + ": not a speaker encoder blob");
  }
  StandInSpeakerEncoder enc = from_tensors(std::move(ar.tensors));
  const std::string recorded = meta.value("checksum", "");
  if (recorded != io::to_hex(enc.checksum())) {
    throw Error(ErrorKind::kCheckpointError,
                path.string() + ": checksum mismatch (recorded " + recorded + ", actual " +
                    io::to_hex(enc.checksum()) + ")");
  }
  return enc;
}

void StandInSpeakerEncoder::save(const std::filesystem::path& path) const {
  io::Archive ar;
  nlohmann::json meta;
  meta["type"] = "stand-in-speaker-encoder";
  meta["version"] = 1;
  meta["checksum"] = io::to_hex(checksum());
  ar.metadata_json = meta.dump();
  ar.tensors = params_;
  io::write_archive(path, ar);
}

RawSpeakerEmbedding StandInSpeakerEncoder::embed(const Matrix& mel) const {
  if (mel.rows != data::kMelBins) {
    throw Error(ErrorKind::kShapeMismatch, "speaker encoder expects 80 mel bins");
  }
  if (mel.cols < kMinFrames) {
    throw Error(ErrorKind::kTooShort, "speaker encoder needs >= 4 frames, got " +
                                          std::to_string(mel.cols));
  }
  const int64_t frames = mel.cols;
  const int64_t bins = data::kMelBins;
  // Per-frame centring removes overall level; only spectral shape remains.
  RowMat x(bins * kKernel, frames);
  x.setZero();
  std::vector<double> centred(bins * frames);
  for (int64_t t = 0; t < frames; ++t) {
    double m = 0.0;
    for (int64_t f = 0; f < bins; ++f) m += mel.at(f, t);
    m /= static_cast<double>(bins);
    for (int64_t f = 0; f < bins; ++f) centred[f * frames + t] = kInputScale * (mel.at(f, t) - m);
  }
  for (int64_t f = 0; f < bins; ++f) {
    for (int k = 0; k < kKernel; ++k) {
      for (int64_t t = 0; t < frames; ++t) {
        const int64_t src = t + k - kKernel / 2;
        if (src >= 0 && src < frames) x(f * kKernel + k, t) = centred[f * frames + src];
      }
    }
  }
  const auto& w = params_.at("conv.weight").values;
  const auto& b = params_.at("conv.bias").values;
  RowMat h = Eigen::Map<const RowMat>(w.data(), kHidden, bins * kKernel) * x;
  Eigen::VectorXd pooled(kHidden);
  for (int c = 0; c < kHidden; ++c) {
    double s = 0.0;
    for (int64_t t = 0; t < frames; ++t) s += std::tanh(h(c, t) + b[c]);
    pooled(c) = s / static_cast<double>(frames);
  }
  const auto& wo = params_.at("out.weight").values;
  Eigen::VectorXd out = Eigen::Map<const RowMat>(wo.data(), kRawEmbeddingDim, kHidden) * pooled;
  return RawSpeakerEmbedding(std::vector<double>(out.data(), out.data() + out.size()));
}

std::filesystem::path default_speaker_encoder_path() {
  if (const char* env = std::getenv("ASCL_SPEAKER_ENCODER"); env != nullptr && *env != '\0') {
    return env;
  }
  return std::filesystem::path(ASCL_ASSET_DIR) / "speaker_encoder_v1.bin";
}

std::shared_ptr<const StandInSpeakerEncoder> default_speaker_encoder() {
  static const auto enc = std::make_shared<const StandInSpeakerEncoder>(
      StandInSpeakerEncoder::load(default_speaker_encoder_path()));
  return enc;
}

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.empty()) {
    throw Error(ErrorKind::kShapeMismatch, "cosine_similarity: size mismatch");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  const double c = dot / (std::sqrt(na) * std::sqrt(nb));
  return std::max(-1.0, std::min(1.0, c));
}

}  // namespace ascl::speaker
