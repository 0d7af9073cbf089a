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

#ifndef ASCL_DATA_FEATURES_H_
#define ASCL_DATA_FEATURES_H_

#include <cstdint>
#include <span>

#include "ascl/matrix.h"
#include "ascl/nn/tensor.h"

namespace ascl::data {

inline constexpr int kFftSize = 1024;
inline constexpr int kHopSize = 256;
inline constexpr int kWinSize = 1024;
inline constexpr int kFreqBins = kFftSize / 2 + 1;  // 513
inline constexpr int kMelBins = 80;
inline constexpr double kMelFmin = 0.0;
inline constexpr double kMelFmax = 12000.0;
inline constexpr double kLogFloor = 1e-5;

// Center-padded frame count, floor(n / hop) + 1.
inline int64_t frame_count(int64_t num_samples) { return num_samples / kHopSize + 1; }

// Periodic Hann window of kWinSize points.
const std::vector<double>& hann_window();

// |STFT| with Hann window, reflect center padding, FFT 1024 / hop 256.
// Shape [513 x frame_count(len)].
Matrix linear_spectrogram(std::span<const double> wave);

// HTK-scale triangular filterbank over 0-12 kHz, shape [80 x 513].
const Matrix& mel_filterbank();

// log(max(filterbank * linear, 1e-5)), shape [80 x frames].
Matrix mel_spectrogram(const Matrix& linear);

inline Matrix log_mel(std::span<const double> wave) {
  return mel_spectrogram(linear_spectrogram(wave));
}

double hz_to_mel(double hz);
double mel_to_hz(double mel);

// Differentiable log-mel of a waveform tensor [L] for reconstruction losses.
// Frames are reflect-padded by (fft - hop) / 2 on each side without centering,
// so a signal of n * hop samples yields exactly n frames.
nn::Tensor log_mel_tensor(const nn::Tensor& wave);

}  // namespace ascl::data

#endif  // ASCL_DATA_FEATURES_H_
