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

#include "ascl/data/episode.h"

#include "ascl/error.h"

namespace ascl::data {

AudioCorpus::AudioCorpus(CorpusManifest manifest, const Alphabet* alphabet)
    : manifest_(std::move(manifest)) {
  for (const auto& entry : manifest_.entries) {
    auto utt = std::make_shared<Utterance>();
    utt->speaker_id = entry.speaker_id;
    utt->audio_path = entry.audio_path;
    WavData wav = read_wav(entry.audio_path);
    if (wav.sample_rate != entry.sample_rate) {
      throw Error(ErrorKind::kSchemaError,
                  entry.audio_path.string() + ": manifest says " +
                      std::to_string(entry.sample_rate) + " Hz, file is " +
                      std::to_string(wav.sample_rate) + " Hz");
    }
    if (wav.samples.empty()) {
      throw Error(ErrorKind::kEmptyWaveform, entry.audio_path.string());
    }
    utt->wave = resample(wav.samples, wav.sample_rate, kSampleRate);
    if (entry.text) {
      if (alphabet == nullptr) {
        throw Error(ErrorKind::kSchemaError, "paired corpus loaded without an alphabet");
      }
      utt->tokens = alphabet->tokenize(*entry.text);
    }
    utterances_.push_back(std::move(utt));
  }
}

EpisodeTuple sample_episode(Rng& rng, const AudioCorpus& paired,
                            const AudioCorpus& untranscribed) {
  if (paired.empty()) throw Error(ErrorKind::kEmptyCorpus, "paired corpus is empty");
  if (untranscribed.empty()) {
    throw Error(ErrorKind::kEmptyCorpus, "untranscribed corpus is empty");
  }
  EpisodeTuple ep;
  ep.support_index = rng.index(paired.size());
  ep.query_index = rng.index(untranscribed.size());
  ep.support = paired.shared(ep.support_index);
  ep.query = untranscribed.shared(ep.query_index);
  ep.x_t = ep.support->tokens;
  return ep;
}

}  // namespace ascl::data
