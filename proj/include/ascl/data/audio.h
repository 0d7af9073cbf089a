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

#ifndef ASCL_DATA_AUDIO_H_
#define ASCL_DATA_AUDIO_H_

#include <filesystem>
#include <span>
#include <vector>

namespace ascl::data {

inline constexpr int kSampleRate = 24000;

using Waveform = std::vector<double>;

struct WavData {
  Waveform samples;  // in [-1, 1)
  int sample_rate = 0;
};

// 16-bit PCM mono only.
WavData read_wav(const std::filesystem::path& path);
// Samples are clipped to [-1, 1] and rounded to 16-bit PCM.
void write_wav(const std::filesystem::path& path, std::span<const double> samples,
               int sample_rate);

bool is_supported_rate(int sample_rate);

// Windowed-sinc band-limited resampling. Output length is
// round(len * sr_out / sr_in); equal rates return the input unchanged.
Waveform resample(std::span<const double> wave, int sr_in, int sr_out = kSampleRate);

}  // namespace ascl::data

#endif  // ASCL_DATA_AUDIO_H_
