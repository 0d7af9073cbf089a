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


#ifndef ASCL_SYNTH_CORPUS_H_
#define ASCL_SYNTH_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ascl/data/audio.h"
#include "ascl/data/manifest.h"
#include "ascl/rng.h"
#include "ascl/speaker/speaker_encoder.h"

namespace ascl::synth {

struct SyntheticCorpusSpec {
  int n_paired_speakers = 8;
  int n_untranscribed_speakers = 24;
  // Extra speakers kept out of training, for zero-shot evaluation.
  int n_eval_speakers = 8;
  int utterances_per_speaker = 20;
  uint64_t seed = 0;
  double duration_s = 1.0;
  int n_eval_texts = 5;
};

// Throws ConfigError on non-positive counts or durations.
void validate(const SyntheticCorpusSpec& spec);

// Fixed harmonic template of one synthetic speaker.
struct SpeakerVoice {
  std::string id;
  double f0 = 120.0;          // Hz
  double formant_scale = 1.0;  // multiplies every formant centre
  double gains[3] = {1.0, 1.0, 1.0};
  double rate = 1.0;           // duration multiplier
};

// Per-symbol rendering rule shared by all speakers.
struct TokenSound {
  std::string symbol;
  bool voiced = true;
  double pitch_ratio = 1.0;
  double f1_mult = 1.0;
  double f2_mult = 1.0;
  int frames = 6;  // nominal duration in 256-sample frames
};

// The fixed symbol inventory; its order defines the alphabet file.
const std::vector<TokenSound>& token_inventory();

SpeakerVoice make_voice(const std::string& id, Rng& rng);

// Renders text (symbols of token_inventory) in a voice at 24 kHz, peak 0.5.
data::Waveform render(const SpeakerVoice& voice, const std::string& text, Rng& rng);

std::string random_text(Rng& rng, double duration_s);

struct SyntheticCorpus {
  std::filesystem::path paired_manifest;
  std::filesystem::path untranscribed_manifest;
  std::filesystem::path eval_manifest;  // empty when n_eval_speakers == 0
  std::filesystem::path alphabet;
  std::filesystem::path eval_texts;
  std::vector<SpeakerVoice> voices;
};

// Writes wavs/*.wav, paired.jsonl (P### speakers, with text),
// untranscribed.jsonl (U###), eval.jsonl (E###, untranscribed format),
// alphabet.txt and eval_texts.txt under out_dir. Byte-identical for equal
// specs. Throws IoError when out_dir is not writable.
SyntheticCorpus make_synthetic_corpus(const SyntheticCorpusSpec& spec,
                                      const std::filesystem::path& out_dir);

struct SeparationReport {
  double mean_same = 0.0;   // mean cosine over same-speaker pairs
  double mean_cross = 0.0;  // mean cosine over cross-speaker pairs
  int64_t same_pairs = 0;
  int64_t cross_pairs = 0;
};

// Embedding separation of the first per_speaker utterances of each speaker.
SeparationReport measure_separation(const data::CorpusManifest& manifest,
                                    const speaker::SpeakerEncoder& encoder, int per_speaker = 3);

}  // namespace ascl::synth

#endif  // ASCL_SYNTH_CORPUS_H_
