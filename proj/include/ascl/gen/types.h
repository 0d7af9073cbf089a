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

#ifndef ASCL_GEN_TYPES_H_
#define ASCL_GEN_TYPES_H_

#include <cstdint>
#include <vector>

#include "ascl/nn/tensor.h"

namespace ascl::gen {

inline constexpr double kLogStdMin = -7.0;
inline constexpr double kLogStdMax = 5.0;

enum class LatentRole { kZv, kZf };

// Frame-aligned latent [D x T]: z_v (acoustic) or z_f (text-prior space).
struct LatentSequence {
  nn::Tensor frames;
  LatentRole role = LatentRole::kZv;

  int64_t channels() const { return frames.dim(0); }
  int64_t length() const { return frames.dim(1); }
};

// Text-conditional prior, one column per token (or per frame once expanded).
struct PriorStats {
  nn::Tensor mean;     // [D x T_text]
  nn::Tensor log_std;  // [D x T_text], clamped to [-7, 5]
};

struct PosteriorStats {
  nn::Tensor mean;     // [D x T]
  nn::Tensor log_std;  // [D x T], clamped to [-7, 5]
};

struct PosteriorSample {
  PosteriorStats stats;
  LatentSequence z_v;
  // The standard-normal draw behind z_v = mean + exp(log_std) * noise.
  std::vector<double> noise;
};

struct TextEncoding {
  nn::Tensor hidden;  // [H x T_text]
  PriorStats prior;
};

struct FlowOutput {
  LatentSequence z;
  nn::Tensor log_det;  // scalar, log|det dz_out/dz_in|
};

// token_of_frame[j] is the 0-based token index aligned to frame j.
struct Alignment {
  std::vector<int64_t> token_of_frame;
};

// Per-token frame counts; training targets sum to the frame count.
struct Durations {
  std::vector<int64_t> frames;
};

}  // namespace ascl::gen

#endif  // ASCL_GEN_TYPES_H_
