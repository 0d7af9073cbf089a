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


#include <cmath>
#include <complex>
#include <fstream>
#include <map>
#include <numbers>
#include <set>

#include "ascl/data/audio.h"
#include "ascl/data/episode.h"
#include "ascl/data/features.h"
#include "ascl/data/manifest.h"
#include "ascl/data/tokenizer.h"
#include "ascl/error.h"
#include "ascl/nn/ops.h"
#include "doctest.h"
#include "test_support.h"

using namespace ascl;
using ascl::testing::scratch_dir;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

data::Waveform sine(double hz, int sr, int n, double amp = 0.5) {
  data::Waveform w(n);
  for (int i = 0; i < n; ++i) w[i] = amp * std::sin(2.0 * kPi * hz * i / sr);
  return w;
}

// Index of the largest |DFT| bin below Nyquist, by direct summation.
int naive_peak_bin(const data::Waveform& w) {
  const int n = static_cast<int>(w.size());
  int best = 0;
  double best_mag = -1.0;
  for (int k = 0; k <= n / 2; ++k) {
    std::complex<double> acc = 0.0;
    for (int i = 0; i < n; ++i) acc += w[i] * std::polar(1.0, -2.0 * kPi * k * i / n);
    if (std::abs(acc) > best_mag) {
      best_mag = std::abs(acc);
      best = k;
    }
  }
  return best;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an ascl::Error");
  return ErrorKind::kIoError;
}

// Writes one short WAV per (speaker, index) plus a manifest line.
fs::path write_manifest(const fs::path& dir, const std::string& name,
                        const std::vector<std::string>& speakers, bool with_text,
                        int sr = data::kSampleRate) {
  std::ofstream m(dir / name);
  for (size_t i = 0; i < speakers.size(); ++i) {
    const std::string wav = name + "_" + std::to_string(i) + ".wav";
    data::write_wav(dir / wav, sine(200.0 + 50.0 * i, sr, sr / 4), sr);
    m << "{\"audio\": \"" << wav << "\", \"speaker\": \"" << speakers[i] << "\", \"sr\": " << sr;
    if (with_text) m << ", \"text\": \"ab\"";
    m << "}\n";
  }
  return dir / name;
}

}  // namespace

TEST_CASE("wav round trip keeps 16-bit samples") {
  const auto dir = scratch_dir("data_wav");
  const data::Waveform w = sine(440.0, 24000, 1000);
  data::write_wav(dir / "a.wav", w, 24000);
  const auto r = data::read_wav(dir / "a.wav");
  CHECK(r.sample_rate == 24000);
  REQUIRE(r.samples.size() == w.size());
  for (size_t i = 0; i < w.size(); ++i) CHECK(std::abs(r.samples[i] - w[i]) <= 1.0 / 32767.0);
  CHECK(kind_of([&] { data::read_wav(dir / "missing.wav"); }) == ErrorKind::kMissingFile);
}

TEST_CASE("resample: passthrough, length arithmetic, unsupported rates") {
  const data::Waveform w = sine(300.0, 24000, 777);
  CHECK(data::resample(w, 24000, 24000) == w);
  CHECK(data::resample(sine(100.0, 48000, 48000), 48000).size() == 24000);
  CHECK(data::resample(sine(100.0, 22050, 1001), 22050).size() ==
        static_cast<size_t>(std::lround(1001.0 * 24000 / 22050)));
  CHECK(kind_of([&] { data::resample(w, 12345); }) == ErrorKind::kUnsupportedRate);
}

TEST_CASE("resample 48k -> 24k keeps a 1 kHz sine at 1 kHz") {
  const data::Waveform out = data::resample(sine(1000.0, 48000, 9600), 48000, 24000);
  REQUIRE(out.size() == 4800);
  // 4800 samples at 24 kHz: bin spacing 5 Hz, 1 kHz is bin 200.
  CHECK(std::abs(naive_peak_bin(out) - 200) <= 1);
}

TEST_CASE("stft shape law and trivial cases") {
  for (int n : {1, 255, 256, 257, 1024, 8191}) {
    const Matrix s = data::linear_spectrogram(data::Waveform(n, 0.1));
    CHECK(s.rows == 513);
    CHECK(s.cols == n / 256 + 1);
  }
  const Matrix zero = data::linear_spectrogram(data::Waveform(1024, 0.0));
  CHECK(zero.cols == 5);
  for (double v : zero.data) CHECK(v == 0.0);
  const Matrix dc = data::linear_spectrogram(data::Waveform(4096, 0.3));
  // Hann transform of a constant: A*N/2 at DC, A*N/4 in bin 1, zero beyond.
  for (int64_t t = 2; t < dc.cols - 2; ++t) {
    CHECK(dc.at(0, t) == doctest::Approx(0.3 * 512).epsilon(1e-9));
    CHECK(dc.at(1, t) == doctest::Approx(0.3 * 256).epsilon(1e-9));
    for (int64_t f = 2; f < dc.rows; ++f) CHECK(dc.at(f, t) < 1e-9);
  }
  CHECK(kind_of([] { data::linear_spectrogram(data::Waveform{}); }) == ErrorKind::kEmptyWaveform);
}

TEST_CASE("bin-centred sine peaks in its bin with the analytic magnitude") {
  const int k = 37;
  const double hz = k * 24000.0 / 1024.0;
  const double amp = 0.4;
  const Matrix s = data::linear_spectrogram(sine(hz, 24000, 8192, amp));
  // Periodic Hann: sum(w) = N/2, so a bin-centred sine of amplitude A has
  // |X[k]| = A * N / 4.
  for (int64_t t = 2; t < s.cols - 2; ++t) {
    int64_t best = 0;
    for (int64_t f = 0; f < s.rows; ++f) {
      if (s.at(f, t) > s.at(best, t)) best = f;
    }
    CHECK(best == k);
    CHECK(s.at(k, t) == doctest::Approx(amp * 1024 / 4).epsilon(1e-6));
  }
}

TEST_CASE("Parseval: framewise spectral energy tracks time-domain energy") {
  Rng rng(1);
  data::Waveform w(8192);
  for (double& x : w) x = rng.uniform(-0.5, 0.5);
  const Matrix s = data::linear_spectrogram(w);
  const auto& win = data::hann_window();
  double win_energy = 0.0;
  for (double v : win) win_energy += v * v;
  double spec = 0.0;
  for (int64_t t = 0; t < s.cols; ++t) {
    // One-sided sum: double every bin except DC and Nyquist.
    for (int64_t f = 0; f < s.rows; ++f) {
      const double m2 = s.at(f, t) * s.at(f, t);
      spec += (f == 0 || f == 512) ? m2 : 2.0 * m2;
    }
  }
  spec /= 1024.0;  // Parseval for a length-1024 DFT
  double energy = 0.0;
  for (double x : w) energy += x * x;
  // Each sample is covered by hop-spaced windows with mean power win_energy / hop.
  const double expected = energy * win_energy / 256.0;
  CHECK(std::abs(spec - expected) / expected < 0.10);
}

TEST_CASE("mel filterbank shape, coverage and zero input") {
  const Matrix& fb = data::mel_filterbank();
  REQUIRE(fb.rows == 80);
  REQUIRE(fb.cols == 513);
  for (int64_t m = 0; m < 80; ++m) {
    double row = 0.0;
    for (int64_t f = 0; f < 513; ++f) {
      CHECK(fb.at(m, f) >= 0.0);
      row += fb.at(m, f);
    }
    CHECK(row > 0.0);
  }
  for (int64_t f = 1; f <= 511; ++f) {
    double col = 0.0;
    for (int64_t m = 0; m < 80; ++m) col += fb.at(m, f);
    CHECK(col > 0.0);
  }
  CHECK(data::mel_to_hz(data::hz_to_mel(1234.5)) == doctest::Approx(1234.5));
  CHECK(data::hz_to_mel(700.0) == doctest::Approx(2595.0 * std::log10(2.0)));
  const Matrix mel = data::mel_spectrogram(Matrix(513, 4, 0.0));
  for (double v : mel.data) CHECK(v == doctest::Approx(std::log(1e-5)));
  CHECK(kind_of([] { data::mel_spectrogram(Matrix(512, 3, 0.0)); }) == ErrorKind::kShapeMismatch);
}

TEST_CASE("mel is framewise: concatenating spectrograms concatenates mels") {
  Rng rng(2);
  Matrix a(513, 3), b(513, 2);
  for (double& v : a.data) v = rng.uniform();
  for (double& v : b.data) v = rng.uniform();
  Matrix ab(513, 5);
  for (int64_t f = 0; f < 513; ++f) {
    for (int t = 0; t < 3; ++t) ab.at(f, t) = a.at(f, t);
    for (int t = 0; t < 2; ++t) ab.at(f, 3 + t) = b.at(f, t);
  }
  const Matrix ma = data::mel_spectrogram(a), mb = data::mel_spectrogram(b);
  const Matrix mab = data::mel_spectrogram(ab);
  for (int64_t m = 0; m < 80; ++m) {
    for (int t = 0; t < 3; ++t) CHECK(mab.at(m, t) == doctest::Approx(ma.at(m, t)).epsilon(1e-12));
    for (int t = 0; t < 2; ++t) CHECK(mab.at(m, 3 + t) == doctest::Approx(mb.at(m, t)).epsilon(1e-12));
  }
}

TEST_CASE("differentiable log-mel agrees with a direct DFT oracle") {
  Rng rng(3);
  const int frames = 4;
  data::Waveform w(frames * 256);
  for (double& x : w) x = rng.uniform(-0.5, 0.5);
  const nn::Tensor mel = data::log_mel_tensor(nn::Tensor({frames * 256}, w));
  REQUIRE(mel.shape() == nn::Shape{80, frames});
  // Oracle: reflect-pad by 384, window, naive DFT, sqrt(|X|^2 + 1e-9), mel, log.
  const int pad = 384;
  const int n = static_cast<int>(w.size());
  auto at = [&](int i) {
    int j = i - pad;
    if (j < 0) j = -j;
    if (j >= n) j = 2 * (n - 1) - j;
    return w[j];
  };
  const auto& win = data::hann_window();
  const Matrix& fb = data::mel_filterbank();
  for (int t = 0; t < frames; t += 3) {
    std::vector<double> mag(513);
    for (int k = 0; k < 513; ++k) {
      std::complex<double> acc = 0.0;
      for (int i = 0; i < 1024; ++i) {
        acc += win[i] * at(t * 256 + i) * std::polar(1.0, -2.0 * kPi * k * i / 1024.0);
      }
      mag[k] = std::sqrt(std::norm(acc) + 1e-9);
    }
    for (int m = 0; m < 80; m += 7) {
      double e = 0.0;
      for (int k = 0; k < 513; ++k) e += fb.at(m, k) * mag[k];
      CHECK(mel.at(m, t) == doctest::Approx(std::log(std::max(e, 1e-5))).epsilon(1e-9));
    }
  }
}

TEST_CASE("manifest loading: valid, schema errors, missing audio, empty") {
  const auto dir = scratch_dir("data_manifest");
  const auto paired = write_manifest(dir, "paired.jsonl", {"A", "B"}, true);
  const auto m = data::load_manifest(paired);
  CHECK(m.kind == data::CorpusKind::kPaired);
  REQUIRE(m.entries.size() == 2);
  CHECK(m.entries[0].speaker_id == "A");
  CHECK(m.entries[1].speaker_id == "B");
  CHECK(m.entries[0].text == "ab");
  CHECK(fs::exists(m.entries[0].audio_path));

  const auto untr = write_manifest(dir, "untr.jsonl", {"C"}, false);
  CHECK(data::load_manifest(untr).kind == data::CorpusKind::kUntranscribed);
  CHECK(kind_of([&] { data::load_manifest(paired, data::CorpusKind::kUntranscribed); }) ==
        ErrorKind::kSchemaError);
  CHECK(kind_of([&] { data::load_manifest(untr, data::CorpusKind::kPaired); }) ==
        ErrorKind::kSchemaError);

  std::ofstream(dir / "missing_field.jsonl") << "{\"audio\": \"paired.jsonl_0.wav\", \"sr\": 24000}\n";
  CHECK(kind_of([&] { data::load_manifest(dir / "missing_field.jsonl"); }) ==
        ErrorKind::kSchemaError);
  std::ofstream(dir / "missing_wav.jsonl")
      << "{\"audio\": \"nope.wav\", \"speaker\": \"A\", \"sr\": 24000}\n";
  CHECK(kind_of([&] { data::load_manifest(dir / "missing_wav.jsonl"); }) ==
        ErrorKind::kMissingFile);
  std::ofstream(dir / "empty.jsonl") << "\n";
  CHECK(kind_of([&] { data::load_manifest(dir / "empty.jsonl"); }) == ErrorKind::kEmptyManifest);

  // save -> load keeps entries and order.
  data::save_manifest(dir / "copy.jsonl", m);
  const auto copy = data::load_manifest(dir / "copy.jsonl");
  REQUIRE(copy.entries.size() == 2);
  CHECK(copy.entries[1].audio_path == m.entries[1].audio_path);
}

TEST_CASE("speaker disjointness") {
  auto make = [](std::vector<std::string> ids, data::CorpusKind kind) {
    data::CorpusManifest m;
    m.kind = kind;
    for (auto& id : ids) m.entries.push_back({"x.wav", id, std::nullopt, 24000});
    return m;
  };
  const auto ab = make({"A", "B"}, data::CorpusKind::kPaired);
  CHECK_NOTHROW(data::assert_disjoint_speakers(ab, make({"C", "D"}, data::CorpusKind::kUntranscribed)));
  CHECK_NOTHROW(data::assert_disjoint_speakers(ab, make({}, data::CorpusKind::kUntranscribed)));
  try {
    data::assert_disjoint_speakers(ab, make({"B", "C"}, data::CorpusKind::kUntranscribed));
    FAIL("expected SpeakerOverlap");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kSpeakerOverlap);
    CHECK(std::string(e.what()).find("{B}") != std::string::npos);
  }
}

TEST_CASE("tokenizer") {
  const data::Alphabet ab({"a", "b"});
  CHECK(ab.tokenize("ab") == std::vector<int>{1, 2});
  CHECK(ab.tokenize("a\xE2\x9C\x93" "b") == std::vector<int>{1, data::Alphabet::kUnk, 2});
  CHECK(kind_of([&] { ab.tokenize("  "); }) == ErrorKind::kEmptyText);
  CHECK(ab.vocab_size() == 3);

  // Injective on known strings: decode inverts tokenize over every string
  // of length <= 4 over a four-symbol alphabet.
  const data::Alphabet four({"x", "y", "z", "\xC3\xA9"});
  std::set<std::vector<int>> seen;
  std::vector<std::string> strings = {""};
  for (int len = 1; len <= 4; ++len) {
    std::vector<std::string> next;
    for (const auto& s : strings) {
      for (const auto& sym : four.symbols()) next.push_back(s + sym);
    }
    for (const auto& s : next) {
      const auto ids = four.tokenize(s);
      CHECK(four.decode(ids) == s);
      CHECK(seen.insert(ids).second);
    }
    strings = next;
  }

  const auto dir = scratch_dir("data_alphabet");
  four.save(dir / "alpha.txt");
  const auto loaded = data::Alphabet::load(dir / "alpha.txt");
  CHECK(loaded.symbols() == four.symbols());
}

TEST_CASE("episode sampling: determinism, singletons, disjointness") {
  const auto dir = scratch_dir("data_episode");
  const data::Alphabet alpha({"a", "b"});
  const data::AudioCorpus p3(data::load_manifest(write_manifest(dir, "p3.jsonl", {"A", "A", "B"}, true)),
                             &alpha);
  const data::AudioCorpus u5(
      data::load_manifest(write_manifest(dir, "u5.jsonl", {"C", "C", "D", "E", "E"}, false)), nullptr);
  Rng r1(0), r2(0);
  for (int i = 0; i < 20; ++i) {
    const auto e1 = data::sample_episode(r1, p3, u5);
    const auto e2 = data::sample_episode(r2, p3, u5);
    CHECK(e1.support_index == e2.support_index);
    CHECK(e1.query_index == e2.query_index);
    CHECK(e1.support_speaker() != e1.query_speaker());
    CHECK(e1.x_t == std::vector<int>{1, 2});
    CHECK_FALSE(e1.y_t_s().empty());
    CHECK_FALSE(e1.y_u_q().empty());
  }
  const data::AudioCorpus p1(data::load_manifest(write_manifest(dir, "p1.jsonl", {"A"}, true)), &alpha);
  const data::AudioCorpus u1(data::load_manifest(write_manifest(dir, "u1.jsonl", {"Z"}, false)), nullptr);
  Rng r3(9);
  for (int i = 0; i < 10; ++i) {
    const auto e = data::sample_episode(r3, p1, u1);
    CHECK(e.support_index == 0);
    CHECK(e.query_index == 0);
  }
  const data::AudioCorpus empty;
  CHECK(kind_of([&] { data::sample_episode(r3, empty, u1); }) == ErrorKind::kEmptyCorpus);
  CHECK(kind_of([&] { data::sample_episode(r3, p1, empty); }) == ErrorKind::kEmptyCorpus);
}

TEST_CASE("episode sampling is uniform over paired entries") {
  const auto dir = scratch_dir("data_uniform");
  const data::Alphabet alpha({"a", "b"});
  const data::AudioCorpus p4(
      data::load_manifest(write_manifest(dir, "p4.jsonl", {"A", "B", "C", "D"}, true)), &alpha);
  const data::AudioCorpus u4(
      data::load_manifest(write_manifest(dir, "u4.jsonl", {"E", "F", "G", "H"}, false)), nullptr);
  Rng rng(0);
  const int n = 10000;
  std::vector<int> support(4, 0), query(4, 0);
  for (int i = 0; i < n; ++i) {
    const auto e = data::sample_episode(rng, p4, u4);
    ++support[e.support_index];
    ++query[e.query_index];
  }
  // Binomial(10000, 1/4): sigma = sqrt(10000 * 1/4 * 3/4).
  const double sigma = std::sqrt(n * 0.25 * 0.75);
  double chi2 = 0.0;
  for (int k = 0; k < 4; ++k) {
    CHECK(std::abs(support[k] - 2500) <= 3.0 * sigma);
    CHECK(std::abs(query[k] - 2500) <= 3.0 * sigma);
    chi2 += (support[k] - 2500.0) * (support[k] - 2500.0) / 2500.0;
  }
  CHECK(chi2 < 16.27);  // 3 dof, 99.9% quantile
}

TEST_CASE("audio corpus resamples to 24 kHz and rejects rate mismatches") {
  const auto dir = scratch_dir("data_rates");
  const auto m16 = write_manifest(dir, "u16.jsonl", {"A"}, false, 16000);
  const data::AudioCorpus c(data::load_manifest(m16), nullptr);
  CHECK(c.at(0).wave.size() == 6000);  // 0.25 s at 24 kHz
  std::ofstream(dir / "lie.jsonl") << "{\"audio\": \"u16.jsonl_0.wav\", \"speaker\": \"A\", \"sr\": 24000}\n";
  CHECK(kind_of([&] { data::AudioCorpus(data::load_manifest(dir / "lie.jsonl"), nullptr); }) ==
        ErrorKind::kSchemaError);
}
