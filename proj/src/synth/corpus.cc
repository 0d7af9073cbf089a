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


#include "ascl/synth/corpus.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>

#include "ascl/data/features.h"
#include "ascl/data/tokenizer.h"
#include "ascl/error.h"

namespace ascl::synth {

namespace {

constexpr double kPeak = 0.5;
constexpr double kMaxHarmonicHz = 10000.0;
constexpr double kFormantHz[3] = {550.0, 1600.0, 2700.0};
constexpr double kFormantBandwidth[3] = {180.0, 280.0, 380.0};
constexpr int kRampSamples = 96;
constexpr int kNoisePartials = 48;
constexpr double kNoiseFloor = 0.002;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double envelope(const SpeakerVoice& v, const TokenSound& t, double hz) {
  double a = 0.02;
  for (int i = 0; i < 3; ++i) {
    double centre = kFormantHz[i] * v.formant_scale;
    if (i == 0) centre *= t.f1_mult;
    if (i == 1) centre *= t.f2_mult;
    const double z = (hz - centre) / (kFormantBandwidth[i] * v.formant_scale);
    a += v.gains[i] * std::exp(-0.5 * z * z);
  }
  return a;
}

std::string id_for(char prefix, int i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%c%03d", prefix, i);
  return buf;
}

std::string utt_name(const std::string& speaker, int i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s_%02d.wav", speaker.c_str(), i);
  return buf;
}

}  // namespace

void validate(const SyntheticCorpusSpec& s) {
  if (s.n_paired_speakers <= 0 || s.n_untranscribed_speakers <= 0 ||
      s.utterances_per_speaker <= 0) {
    throw Error(ErrorKind::kConfigError, "speaker and utterance counts must be positive");
  }
  if (s.n_eval_speakers < 0 || s.n_eval_texts < 0) {
    throw Error(ErrorKind::kConfigError, "eval counts must be non-negative");
  }
  if (!(s.duration_s > 0.0) || s.duration_s > 60.0) {
    throw Error(ErrorKind::kConfigError, "duration_s must lie in (0, 60]");
  }
}

const std::vector<TokenSound>& token_inventory() {
  // Vowel-like symbols move the first two formants; the remaining ones are
  // pitched glides or unvoiced hiss.
  static const std::vector<TokenSound> table = {
      {"a", true, 1.00, 1.30, 0.80, 7}, {"e", true, 1.05, 0.90, 1.30, 6},
      {"i", true, 1.15, 0.55, 1.55, 5}, {"o", true, 0.95, 1.00, 0.60, 7},
      {"u", true, 0.90, 0.60, 0.55, 6}, {"m", true, 0.85, 0.45, 0.90, 5},
      {"n", true, 0.92, 0.50, 1.10, 4}, {"l", true, 1.08, 0.80, 0.95, 5},
      {"r", true, 1.20, 0.95, 0.75, 4}, {"s", false, 1.00, 1.00, 1.00, 6},
      {"f", false, 1.00, 0.70, 0.70, 5}, {"h", false, 1.00, 0.45, 0.45, 4},
  };
  return table;
}

SpeakerVoice make_voice(const std::string& id, Rng& rng) {
  SpeakerVoice v;
  v.id = id;
  v.f0 = 80.0 * std::pow(3.0, rng.uniform());  // 80-240 Hz, log-uniform
  v.formant_scale = std::exp(rng.uniform(std::log(0.69), std::log(1.45)));  // log-uniform
  for (double& g : v.gains) g = rng.uniform(0.1, 1.0);
  v.rate = rng.uniform(0.85, 1.15);
  return v;
}

std::string random_text(Rng& rng, double duration_s) {
  const auto& inv = token_inventory();
  const double mean_frames = 5.5;
  const int nominal =
      static_cast<int>(std::lround(duration_s * data::kSampleRate / (mean_frames * data::kHopSize)));
  const int n = std::max(3, nominal - 2 + static_cast<int>(rng.index(5)));
  std::string text;
  for (int i = 0; i < n; ++i) text += inv[rng.index(inv.size())].symbol;
  return text;
}

data::Waveform render(const SpeakerVoice& v, const std::string& text, Rng& rng) {
  const auto& inv = token_inventory();
  std::map<std::string, const TokenSound*> by_symbol;
  for (const auto& t : inv) by_symbol[t.symbol] = &t;

  data::Waveform wave;
  double phase = 0.0;  // fundamental phase, continuous across voiced tokens
  for (const std::string& sym : data::utf8_code_points(text)) {
    const auto it = by_symbol.find(sym);
    if (it == by_symbol.end()) throw Error(ErrorKind::kSchemaError, "no sound for '" + sym + "'");
    const TokenSound& t = *it->second;
    const int n = static_cast<int>(std::lround(t.frames * data::kHopSize * v.rate));
    std::vector<double> seg(n, 0.0);
    if (t.voiced) {
      const double f0 = v.f0 * t.pitch_ratio;
      const int harmonics = std::max(1, static_cast<int>(kMaxHarmonicHz / f0));
      std::vector<double> amp(harmonics + 1, 0.0);
      for (int k = 1; k <= harmonics; ++k) amp[k] = envelope(v, t, k * f0);
      const double dphi = kTwoPi * f0 / data::kSampleRate;
      for (int s = 0; s < n; ++s) {
        // sin(k phi) by the Chebyshev recurrence.
        const double c2 = 2.0 * std::cos(phase);
        double prev = 0.0;
        double cur = std::sin(phase);
        double acc = amp[1] * cur;
        for (int k = 2; k <= harmonics; ++k) {
          const double next = c2 * cur - prev;
          prev = cur;
          cur = next;
          acc += amp[k] * cur;
        }
        seg[s] = acc;
        phase = std::fmod(phase + dphi, kTwoPi);
      }
    } else {
      for (int p = 0; p < kNoisePartials; ++p) {
        const double hz = v.formant_scale * t.f1_mult * rng.uniform(2500.0, 7000.0);
        const double ph = rng.uniform(0.0, kTwoPi);
        const double a = envelope(v, t, hz) + 0.3 * v.gains[2];
        const double w = kTwoPi * hz / data::kSampleRate;
        for (int s = 0; s < n; ++s) seg[s] += a * std::sin(ph + w * s);
      }
    }
    const int ramp = std::min(kRampSamples, n / 2);
    for (int s = 0; s < ramp; ++s) {
      const double g = static_cast<double>(s) / ramp;
      seg[s] *= g;
      seg[n - 1 - s] *= g;
    }
    wave.insert(wave.end(), seg.begin(), seg.end());
  }
  double peak = 0.0;
  for (double x : wave) peak = std::max(peak, std::abs(x));
  const double gain = peak > 0.0 ? kPeak / peak : 0.0;
  for (double& x : wave) x = x * gain + kNoiseFloor * (2.0 * rng.uniform() - 1.0);
  return wave;
}

SyntheticCorpus make_synthetic_corpus(const SyntheticCorpusSpec& spec,
                                      const std::filesystem::path& out_dir) {
  validate(spec);
  std::error_code ec;
  std::filesystem::create_directories(out_dir / "wavs", ec);
  if (ec) throw Error(ErrorKind::kIoError, "cannot create " + out_dir.string() + ": " + ec.message());

  Rng rng(spec.seed);
  SyntheticCorpus out;
  std::vector<SpeakerVoice> paired, untr, eval;
  for (int i = 0; i < spec.n_paired_speakers; ++i) paired.push_back(make_voice(id_for('P', i), rng));
  for (int i = 0; i < spec.n_untranscribed_speakers; ++i) {
    untr.push_back(make_voice(id_for('U', i), rng));
  }
  for (int i = 0; i < spec.n_eval_speakers; ++i) eval.push_back(make_voice(id_for('E', i), rng));

  auto build = [&](const std::vector<SpeakerVoice>& voices, data::CorpusKind kind) {
    data::CorpusManifest m;
    m.kind = kind;
    for (const auto& v : voices) {
      for (int u = 0; u < spec.utterances_per_speaker; ++u) {
        const std::string text = random_text(rng, spec.duration_s);
        const data::Waveform wave = render(v, text, rng);
        const auto path = out_dir / "wavs" / utt_name(v.id, u);
        data::write_wav(path, wave, data::kSampleRate);
        data::ManifestEntry e;
        e.audio_path = path;
        e.speaker_id = v.id;
        e.sample_rate = data::kSampleRate;
        if (kind == data::CorpusKind::kPaired) e.text = text;
        m.entries.push_back(std::move(e));
      }
    }
    return m;
  };

  out.paired_manifest = out_dir / "paired.jsonl";
  out.untranscribed_manifest = out_dir / "untranscribed.jsonl";
  data::save_manifest(out.paired_manifest, build(paired, data::CorpusKind::kPaired));
  data::save_manifest(out.untranscribed_manifest, build(untr, data::CorpusKind::kUntranscribed));
  if (!eval.empty()) {
    out.eval_manifest = out_dir / "eval.jsonl";
    data::save_manifest(out.eval_manifest, build(eval, data::CorpusKind::kUntranscribed));
  }

  std::vector<std::string> symbols;
  for (const auto& t : token_inventory()) symbols.push_back(t.symbol);
  out.alphabet = out_dir / "alphabet.txt";
  data::Alphabet(symbols).save(out.alphabet);

  out.eval_texts = out_dir / "eval_texts.txt";
  std::ofstream texts(out.eval_texts, std::ios::trunc);
  if (!texts) throw Error(ErrorKind::kIoError, "cannot write " + out.eval_texts.string());
  for (int i = 0; i < spec.n_eval_texts; ++i) texts << random_text(rng, spec.duration_s) << "\n";

  out.voices = paired;
  out.voices.insert(out.voices.end(), untr.begin(), untr.end());
  out.voices.insert(out.voices.end(), eval.begin(), eval.end());
  return out;
}

SeparationReport measure_separation(const data::CorpusManifest& manifest,
                                    const speaker::SpeakerEncoder& encoder, int per_speaker) {
  std::map<std::string, int> taken;
  std::vector<std::pair<std::string, std::vector<double>>> emb;
  for (const auto& e : manifest.entries) {
    if (taken[e.speaker_id]++ >= per_speaker) continue;
    const auto wav = data::read_wav(e.audio_path);
    const auto wave = data::resample(wav.samples, wav.sample_rate);
    emb.emplace_back(e.speaker_id, encoder.embed(data::log_mel(wave)).values());
  }
  SeparationReport r;
  double same = 0.0, cross = 0.0;
  for (size_t i = 0; i < emb.size(); ++i) {
    for (size_t j = i + 1; j < emb.size(); ++j) {
      const double c = speaker::cosine_similarity(emb[i].second, emb[j].second);
      if (emb[i].first == emb[j].first) {
        same += c;
        ++r.same_pairs;
      } else {
        cross += c;
        ++r.cross_pairs;
      }
    }
  }
  if (r.same_pairs) r.mean_same = same / r.same_pairs;
  if (r.cross_pairs) r.mean_cross = cross / r.cross_pairs;
  return r;
}

}  // namespace ascl::synth
