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

#include "ascl/data/audio.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numbers>
#include <numeric>

#include "ascl/error.h"

namespace ascl::data {

namespace {

uint32_t read_u32(const char* p) {
  return static_cast<uint32_t>(static_cast<unsigned char>(p[0])) |
         static_cast<uint32_t>(static_cast<unsigned char>(p[1])) << 8 |
         static_cast<uint32_t>(static_cast<unsigned char>(p[2])) << 16 |
         static_cast<uint32_t>(static_cast<unsigned char>(p[3])) << 24;
}

uint16_t read_u16(const char* p) {
  return static_cast<uint16_t>(static_cast<unsigned char>(p[0]) |
                               static_cast<unsigned char>(p[1]) << 8);
}

void put_u32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u16(std::string& out, uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

constexpr std::array<int, 6> kSupportedRates = {8000, 16000, 22050, 24000, 44100, 48000};

}  // namespace

WavData read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kMissingFile, path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || bytes.compare(0, 4, "RIFF") != 0 ||
      bytes.compare(8, 4, "WAVE") != 0) {
    throw Error(ErrorKind::kIoError, path.string() + ": not a RIFF/WAVE file");
  }
  WavData out;
  bool have_fmt = false;
  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::string id = bytes.substr(pos, 4);
    const uint32_t size = read_u32(bytes.data() + pos + 4);
    const size_t body = pos + 8;
    if (body + size > bytes.size()) {
      throw Error(ErrorKind::kIoError, path.string() + ": truncated chunk " + id);
    }
    if (id == "fmt ") {
      if (size < 16) throw Error(ErrorKind::kIoError, path.string() + ": short fmt chunk");
      const uint16_t format = read_u16(bytes.data() + body);
      const uint16_t channels = read_u16(bytes.data() + body + 2);
      out.sample_rate = static_cast<int>(read_u32(bytes.data() + body + 4));
      const uint16_t bits = read_u16(bytes.data() + body + 14);
      if (format != 1 || channels != 1 || bits != 16) {
        throw Error(ErrorKind::kIoError,
                    path.string() + ": only 16-bit PCM mono WAV is supported");
      }
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) throw Error(ErrorKind::kIoError, path.string() + ": data before fmt");
      const size_t n = size / 2;
      out.samples.resize(n);
      for (size_t i = 0; i < n; ++i) {
        const auto s = static_cast<int16_t>(read_u16(bytes.data() + body + 2 * i));
        out.samples[i] = static_cast<double>(s) / 32768.0;
      }
      return out;
    }
    pos = body + size + (size & 1);
  }
  throw Error(ErrorKind::kIoError, path.string() + ": no data chunk");
}

void write_wav(const std::filesystem::path& path, std::span<const double> samples,
               int sample_rate) {
  std::string out;
  const auto data_bytes = static_cast<uint32_t>(samples.size() * 2);
  out.reserve(44 + data_bytes);
  out += "RIFF";
  put_u32(out, 36 + data_bytes);
  out += "WAVEfmt ";
  put_u32(out, 16);
  put_u16(out, 1);
  put_u16(out, 1);
  put_u32(out, static_cast<uint32_t>(sample_rate));
  put_u32(out, static_cast<uint32_t>(sample_rate) * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  out += "data";
  put_u32(out, data_bytes);
  for (double x : samples) {
    const double c = std::clamp(x, -1.0, 1.0);
    const auto s = static_cast<int16_t>(std::lround(c * 32767.0));
    put_u16(out, static_cast<uint16_t>(s));
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::kIoError, "cannot write " + path.string());
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw Error(ErrorKind::kIoError, "write failed: " + path.string());
}

bool is_supported_rate(int sample_rate) {
  return std::find(kSupportedRates.begin(), kSupportedRates.end(), sample_rate) !=
         kSupportedRates.end();
}

Waveform resample(std::span<const double> wave, int sr_in, int sr_out) {
  if (!is_supported_rate(sr_in)) {
    throw Error(ErrorKind::kUnsupportedRate, std::to_string(sr_in) + " Hz");
  }
  if (sr_out <= 0) throw Error(ErrorKind::kUnsupportedRate, std::to_string(sr_out) + " Hz");
  if (sr_in == sr_out) return Waveform(wave.begin(), wave.end());

  const auto len = static_cast<int64_t>(wave.size());
  const int64_t out_len = (len * sr_out + sr_in / 2) / sr_in;
  // Cutoff relative to the input Nyquist; downsampling lowers it to the output
  // Nyquist. A 32-zero-crossing Blackman-windowed sinc.
  const double cutoff = 0.97 * std::min(1.0, static_cast<double>(sr_out) / sr_in);
  constexpr double kZeroCrossings = 32.0;
  const double half_width = kZeroCrossings / cutoff;
  const double step = static_cast<double>(sr_in) / sr_out;

  Waveform out(out_len, 0.0);
  for (int64_t i = 0; i < out_len; ++i) {
    const double center = static_cast<double>(i) * step;
    const auto lo = static_cast<int64_t>(std::ceil(center - half_width));
    const auto hi = static_cast<int64_t>(std::floor(center + half_width));
    double acc = 0.0;
    for (int64_t j = std::max<int64_t>(lo, 0); j <= std::min(hi, len - 1); ++j) {
      const double x = static_cast<double>(j) - center;
      const double arg = cutoff * x;
      const double sinc =
          std::abs(arg) < 1e-12 ? 1.0 : std::sin(std::numbers::pi * arg) / (std::numbers::pi * arg);
      const double u = x / half_width;  // in [-1, 1]
      const double window = 0.42 + 0.5 * std::cos(std::numbers::pi * u) +
                            0.08 * std::cos(2.0 * std::numbers::pi * u);
      acc += wave[j] * cutoff * sinc * window;
    }
    out[i] = acc;
  }
  return out;
}

}  // namespace ascl::data
