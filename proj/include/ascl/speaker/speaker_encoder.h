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

#ifndef ASCL_SPEAKER_SPEAKER_ENCODER_H_
#define ASCL_SPEAKER_SPEAKER_ENCODER_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ascl/io/archive.h"
#include "ascl/matrix.h"

namespace ascl::speaker {

inline constexpr int kRawEmbeddingDim = 512;
inline constexpr int kSpeakerEmbeddingDim = 256;
inline constexpr int kMinFrames = 4;

// Output of the frozen encoder. Always 512 finite values.
class RawSpeakerEmbedding {
 public:
  explicit RawSpeakerEmbedding(std::vector<double> values);
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> values_;
};

// Frozen mel -> 512-d encoder contract. Implementations are read-only after
// construction and safe to share across threads.
class SpeakerEncoder {
 public:
  virtual ~SpeakerEncoder() = default;
  // mel is [80 x T] log-mel with T >= 4; throws TooShort otherwise.
  virtual RawSpeakerEmbedding embed(const Matrix& mel) const = 0;
};

// Adapter for dropping in an external encoder.
class FunctionSpeakerEncoder : public SpeakerEncoder {
 public:
  using Fn = std::function<std::vector<double>(const Matrix&)>;
  explicit FunctionSpeakerEncoder(Fn fn) : fn_(std::move(fn)) {}
  RawSpeakerEmbedding embed(const Matrix& mel) const override;

 private:
  Fn fn_;
};

// Built-in lightweight stand-in: per-frame centred log-mel, a width-3
// convolution to 256 channels with tanh, mean pooling over time and a linear
// map to 512. Weights come from a versioned blob and are never updated.
class StandInSpeakerEncoder : public SpeakerEncoder {
 public:
  static constexpr int kHidden = 256;
  static constexpr int kKernel = 3;
  static constexpr uint64_t kSeed = 20260417;

  // Fresh weights from a seed; used to produce the shipped blob.
  static StandInSpeakerEncoder generate(uint64_t seed = kSeed);
  // Verifies the blob's recorded checksum before accepting it.
  static StandInSpeakerEncoder load(const std::filesystem::path& path);
  static StandInSpeakerEncoder from_tensors(std::map<std::string, io::ArchiveTensor> tensors);

  void save(const std::filesystem::path& path) const;

  RawSpeakerEmbedding embed(const Matrix& mel) const override;

  const std::map<std::string, io::ArchiveTensor>& parameters() const { return params_; }
  uint64_t checksum() const { return io::checksum(params_); }

 private:
  std::map<std::string, io::ArchiveTensor> params_;
};

// Checksum of the blob shipped in assets/.
inline constexpr uint64_t kShippedEncoderChecksum = 0x964159fe2fc0610bULL;

// $ASCL_SPEAKER_ENCODER if set, else the in-repo assets/speaker_encoder_v1.bin.
std::filesystem::path default_speaker_encoder_path();

// Loads the default blob once per process.
std::shared_ptr<const StandInSpeakerEncoder> default_speaker_encoder();

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace ascl::speaker

#endif  // ASCL_SPEAKER_SPEAKER_ENCODER_H_
