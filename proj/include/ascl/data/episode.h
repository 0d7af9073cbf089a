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

#ifndef ASCL_DATA_EPISODE_H_
#define ASCL_DATA_EPISODE_H_

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "ascl/data/audio.h"
#include "ascl/data/manifest.h"
#include "ascl/data/tokenizer.h"
#include "ascl/rng.h"

namespace ascl::data {

struct Utterance {
  std::string speaker_id;
  std::filesystem::path audio_path;
  std::vector<int> tokens;  // empty for untranscribed audio
  Waveform wave;            // 24 kHz
};

// A manifest with its audio decoded and resampled to 24 kHz once at load.
// Immutable afterwards.
class AudioCorpus {
 public:
  AudioCorpus() = default;
  // Paired manifests need an alphabet for their text.
  AudioCorpus(CorpusManifest manifest, const Alphabet* alphabet);

  const CorpusManifest& manifest() const { return manifest_; }
  CorpusKind kind() const { return manifest_.kind; }
  size_t size() const { return utterances_.size(); }
  bool empty() const { return utterances_.empty(); }
  const Utterance& at(size_t i) const { return *utterances_.at(i); }
  std::shared_ptr<const Utterance> shared(size_t i) const { return utterances_.at(i); }

 private:
  CorpusManifest manifest_;
  std::vector<std::shared_ptr<const Utterance>> utterances_;
};

// One training draw [x_t, y_t_s, y_u_q] with speaker identities.
struct EpisodeTuple {
  std::vector<int> x_t;
  std::shared_ptr<const Utterance> support;  // y_t_s
  std::shared_ptr<const Utterance> query;    // y_u_q
  size_t support_index = 0;
  size_t query_index = 0;

  const Waveform& y_t_s() const { return support->wave; }
  const Waveform& y_u_q() const { return query->wave; }
  const std::string& support_speaker() const { return support->speaker_id; }
  const std::string& query_speaker() const { return query->speaker_id; }
};

// Independent uniform draws: support index first, then query index.
EpisodeTuple sample_episode(Rng& rng, const AudioCorpus& paired,
                            const AudioCorpus& untranscribed);

}  // namespace ascl::data

#endif  // ASCL_DATA_EPISODE_H_
