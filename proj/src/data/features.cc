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

#include "ascl/data/features.h"

#include <fftw3.h>

#include <Eigen/Core>
#include <cmath>
#include <numbers>

#include "ascl/data/audio.h"
#include "ascl/error.h"
#include "ascl/nn/ops.h"

namespace ascl::data {

namespace {

// Index into [0, n) under whole-sample reflection (period 2n - 2).
int64_t reflect_index(int64_t i, int64_t n) {
  if (n == 1) return 0;
  const int64_t period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

struct FftPlan {
  double* in = nullptr;
  fftw_complex* out = nullptr;
  fftw_plan plan = nullptr;

  FftPlan() {
    in = static_cast<double*>(fftw_malloc(sizeof(double) * kFftSize));
    out = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * kFreqBins));
    plan = fftw_plan_dft_r2c_1d(kFftSize, in, out, FFTW_ESTIMATE);
  }
  ~FftPlan() {
    fftw_destroy_plan(plan);
    fftw_free(in);
    fftw_free(out);
  }
};

const FftPlan& fft_plan() {
  // Planning is not thread-safe in FFTW; the static initializer serializes it.
  static const FftPlan plan;
  return plan;
}

}  // namespace

const std::vector<double>& hann_window() {
  static const std::vector<double> window = [] {
    std::vector<double> w(kWinSize);
    for (int n = 0; n < kWinSize; ++n) {
      w[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * n / kWinSize);
    }
    return w;
  }();
  return window;
}

Matrix linear_spectrogram(std::span<const double> wave) {
  if (wave.empty()) throw Error(ErrorKind::kEmptyWaveform, "linear_spectrogram");
  const auto n = static_cast<int64_t>(wave.size());
  const int64_t frames = frame_count(n);
  const int64_t pad = kFftSize / 2;
  const auto& window = hann_window();
  const FftPlan& plan = fft_plan();

  Matrix spec(kFreqBins, frames);
  double* in = static_cast<double*>(fftw_malloc(sizeof(double) * kFftSize));
  auto* out = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * kFreqBins));
  for (int64_t f = 0; f < frames; ++f) {
    const int64_t start = f * kHopSize - pad;
    for (int i = 0; i < kFftSize; ++i) {
      in[i] = wave[reflect_index(start + i, n)] * window[i];
    }
    fftw_execute_dft_r2c(plan.plan, in, out);
    for (int k = 0; k < kFreqBins; ++k) {
      spec.at(k, f) = std::hypot(out[k][0], out[k][1]);
    }
  }
  fftw_free(in);
  fftw_free(out);
  return spec;
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

const Matrix& mel_filterbank() {
  static const Matrix fb = [] {
    Matrix m(kMelBins, kFreqBins);
    const double mel_lo = hz_to_mel(kMelFmin);
    const double mel_hi = hz_to_mel(kMelFmax);
    std::vector<double> edges(kMelBins + 2);
    for (int i = 0; i < kMelBins + 2; ++i) {
      edges[i] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * i / (kMelBins + 1));
    }
    const double bin_hz = static_cast<double>(kSampleRate) / kFftSize;
    for (int b = 0; b < kMelBins; ++b) {
      const double lo = edges[b], mid = edges[b + 1], hi = edges[b + 2];
      for (int k = 0; k < kFreqBins; ++k) {
        const double f = k * bin_hz;
        double w = 0.0;
        if (f > lo && f <= mid) w = (f - lo) / (mid - lo);
        else if (f > mid && f < hi) w = (hi - f) / (hi - mid);
        m.at(b, k) = w;
      }
    }
    return m;
  }();
  return fb;
}

Matrix mel_spectrogram(const Matrix& linear) {
  if (linear.rows != kFreqBins) {
    throw Error(ErrorKind::kShapeMismatch,
                "mel_spectrogram expects 513 rows, got " + std::to_string(linear.rows));
  }
  using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const Matrix& fb = mel_filterbank();
  Matrix mel(kMelBins, linear.cols);
  Eigen::Map<RowMat>(mel.data.data(), kMelBins, linear.cols).noalias() =
      Eigen::Map<const RowMat>(fb.data.data(), kMelBins, kFreqBins) *
      Eigen::Map<const RowMat>(linear.data.data(), kFreqBins, linear.cols);
  for (double& v : mel.data) v = std::log(std::max(v, kLogFloor));
  return mel;
}

nn::Tensor log_mel_tensor(const nn::Tensor& wave) {
  // Windowed DFT basis as a fixed convolution: rows 0..512 are cosines,
  // 513..1025 sines.
  static const nn::Tensor basis = [] {
    const auto& w = hann_window();
    std::vector<double> v(2 * kFreqBins * kFftSize);
    for (int k = 0; k < kFreqBins; ++k) {
      for (int n = 0; n < kFftSize; ++n) {
        const double ang = 2.0 * std::numbers::pi * k * n / kFftSize;
        v[k * kFftSize + n] = w[n] * std::cos(ang);
        v[(kFreqBins + k) * kFftSize + n] = -w[n] * std::sin(ang);
      }
    }
    return nn::Tensor({2 * kFreqBins, 1, kFftSize}, std::move(v));
  }();
  static const nn::Tensor filterbank = [] {
    const Matrix& fb = mel_filterbank();
    return nn::Tensor({fb.rows, fb.cols}, fb.data);
  }();

  const int64_t pad = (kFftSize - kHopSize) / 2;
  nn::Tensor x = nn::reshape(wave, {1, wave.numel()});
  x = nn::reflect_pad_cols(x, pad, pad);
  nn::ConvOptions opt;
  opt.stride = kHopSize;
  nn::Tensor spec = nn::conv1d(x, basis, nn::Tensor(), opt);
  nn::Tensor re = nn::slice_rows(spec, 0, kFreqBins);
  nn::Tensor im = nn::slice_rows(spec, kFreqBins, kFreqBins);
  nn::Tensor mag = nn::sqrt(nn::add_scalar(nn::add(nn::square(re), nn::square(im)), 1e-9));
  return nn::log_clamp(nn::matmul(filterbank, mag), kLogFloor);
}

}  // namespace ascl::data
