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


#ifndef ASCL_EVAL_SECS_H_
#define ASCL_EVAL_SECS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ascl/data/audio.h"
#include "ascl/data/episode.h"
#include "ascl/data/manifest.h"
#include "ascl/gen/model.h"
#include "ascl/speaker/speaker_encoder.h"
#include "ascl/train/trainer.h"

namespace ascl::eval {

// Cosine similarity of the encoder's raw embeddings of the two log-mels.
// Throws TooShort for waveforms under four frames.
double secs(const data::Waveform& a, const data::Waveform& b,
            const speaker::SpeakerEncoder& encoder);

struct SecsRow {
  std::string utterance_id;
  std::string reference_speaker;
  double secs_to_reference = 0.0;
  double secs_to_support = 0.0;
  bool seen_speaker = false;  // reference speaker was part of training
};

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
};

struct SecsReport {
  std::vector<SecsRow> rows;
  std::set<std::string> seen_speakers;

  MeanStd reference_summary() const;
  MeanStd support_summary() const;
};

MeanStd mean_std(const std::vector<double>& values);

// For every (text, reference) pair: synthesize the text in the reference
// voice, then score it against the reference and against a support control
// utterance drawn (seeded) from support_pool. References by training
// speakers are kept but flagged. Throws UntrainedModel.
SecsReport evaluate_zero_shot(const train::LoadedModel& model, const data::AudioCorpus& references,
                              const std::vector<std::string>& texts,
                              const data::AudioCorpus& support_pool,
                              const speaker::SpeakerEncoder& eval_encoder, uint64_t seed);

inline constexpr const char* kReportHeader =
    "utterance_id,reference_speaker,secs_to_reference,secs_to_support";

// <out_dir>/secs_report.csv and <out_dir>/secs_summary.json.
void write_report(const SecsReport& report, const std::filesystem::path& out_dir);

// One speaker-swap trial: a support utterance re-voiced as the query
// speaker through the flow, scored against both ground truths.
struct SwapTrial {
  std::string support_speaker;
  std::string query_speaker;
  double secs_to_query = 0.0;
  double secs_to_support = 0.0;
};

// n seeded trials of Dec(f^-1(f(z_v_s, g_s), g_q)) with supports from
// paired and queries from queries. Uses the posterior mean for z_v_s.
std::vector<SwapTrial> swap_trials(const gen::VitsModel& model,
                                   const speaker::SpeakerEncoder& encoder,
                                   const data::AudioCorpus& paired,
                                   const data::AudioCorpus& queries, int n, uint64_t seed);

}  // namespace ascl::eval

#endif  // ASCL_EVAL_SECS_H_
