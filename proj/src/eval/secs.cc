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


#include "ascl/eval/secs.h"

#include <cmath>
#include <fstream>

#include "ascl/data/features.h"
#include "ascl/error.h"
#include "ascl/nn/ops.h"
#include "json.hpp"

namespace ascl::eval {

double secs(const data::Waveform& a, const data::Waveform& b,
            const speaker::SpeakerEncoder& encoder) {
  const auto ea = encoder.embed(data::log_mel(a));
  const auto eb = encoder.embed(data::log_mel(b));
  return speaker::cosine_similarity(ea.values(), eb.values());
}

MeanStd mean_std(const std::vector<double>& v) {
  MeanStd out;
  if (v.empty()) return out;
  for (double x : v) out.mean += x;
  out.mean /= static_cast<double>(v.size());
  for (double x : v) out.std += (x - out.mean) * (x - out.mean);
  out.std = std::sqrt(out.std / static_cast<double>(v.size()));
  return out;
}

MeanStd SecsReport::reference_summary() const {
  std::vector<double> v;
  for (const auto& r : rows) v.push_back(r.secs_to_reference);
  return mean_std(v);
}

MeanStd SecsReport::support_summary() const {
  std::vector<double> v;
  for (const auto& r : rows) v.push_back(r.secs_to_support);
  return mean_std(v);
}

SecsReport evaluate_zero_shot(const train::LoadedModel& loaded,
                              const data::AudioCorpus& references,
                              const std::vector<std::string>& texts,
                              const data::AudioCorpus& support_pool,
                              const speaker::SpeakerEncoder& eval_encoder, uint64_t seed) {
  if (loaded.model.trained_steps <= 0) {
    throw Error(ErrorKind::kUntrainedModel, "checkpoint has no completed training steps");
  }
  const speaker::SpeakerEncoder& train_encoder =
      loaded.encoder ? *loaded.encoder : eval_encoder;
  SecsReport report;
  if (texts.empty()) return report;
  if (support_pool.empty()) throw Error(ErrorKind::kEmptyCorpus, "no support utterances");
  Rng rng(seed);
  for (size_t t = 0; t < texts.size(); ++t) {
    const std::vector<int> tokens = loaded.alphabet.tokenize(texts[t]);
    for (size_t r = 0; r < references.size(); ++r) {
      const data::Utterance& ref = references.at(r);
      const data::Utterance& support = support_pool.at(rng.index(support_pool.size()));
      const gen::Synthesis out = loaded.model.synthesize(tokens, ref.wave, train_encoder, rng);
      SecsRow row;
      row.utterance_id = "t" + std::to_string(t) + "_" + ref.audio_path.stem().string();
      row.reference_speaker = ref.speaker_id;
      row.secs_to_reference = secs(out.wave, ref.wave, eval_encoder);
      row.secs_to_support = secs(out.wave, support.wave, eval_encoder);
      row.seen_speaker = loaded.training_speakers.count(ref.speaker_id) > 0;
      if (row.seen_speaker) report.seen_speakers.insert(ref.speaker_id);
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

void write_report(const SecsReport& report, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  const auto csv_path = out_dir / "secs_report.csv";
  std::ofstream csv(csv_path, std::ios::trunc);
  if (!csv) throw Error(ErrorKind::kIoError, "cannot write " + csv_path.string());
  csv << kReportHeader << "\n";
  csv.precision(10);
  for (const auto& r : report.rows) {
    csv << r.utterance_id << "," << r.reference_speaker << "," << r.secs_to_reference << ","
        << r.secs_to_support << "\n";
  }
  auto summary = [&](const MeanStd& m) {
    if (report.rows.empty()) return nlohmann::json{{"mean", nullptr}, {"std", nullptr}};
    return nlohmann::json{{"mean", m.mean}, {"std", m.std}};
  };
  nlohmann::json j;
  j["rows"] = report.rows.size();
  j["secs_to_reference"] = summary(report.reference_summary());
  j["secs_to_support"] = summary(report.support_summary());
  j["seen_speakers"] = report.seen_speakers;
  const auto json_path = out_dir / "secs_summary.json";
  std::ofstream js(json_path, std::ios::trunc);
  if (!js) throw Error(ErrorKind::kIoError, "cannot write " + json_path.string());
  js << j.dump(2) << "\n";
}

std::vector<SwapTrial> swap_trials(const gen::VitsModel& model,
                                   const speaker::SpeakerEncoder& encoder,
                                   const data::AudioCorpus& paired,
                                   const data::AudioCorpus& queries, int n, uint64_t seed) {
  if (paired.empty() || queries.empty()) throw Error(ErrorKind::kEmptyCorpus, "no trial audio");
  nn::NoGradGuard no_grad;
  Rng rng(seed);
  std::vector<SwapTrial> out;
  for (int i = 0; i < n; ++i) {
    const data::Utterance& s = paired.at(rng.index(paired.size()));
    const data::Utterance& q = queries.at(rng.index(queries.size()));
    const Matrix lin_s = data::linear_spectrogram(s.wave);
    const speaker::SpeakerEmbedding g_s =
        model.speaker_embedding(encoder.embed(data::mel_spectrogram(lin_s)));
    const speaker::SpeakerEmbedding g_q = model.speaker_embedding(encoder.embed(data::log_mel(q.wave)));
    const gen::PosteriorStats post = model.posterior.stats(lin_s);
    const nn::Tensor y = model.generate_query({post.mean, gen::LatentRole::kZv}, g_s, g_q);
    const data::Waveform wave(y.data().begin(), y.data().end());
    out.push_back({s.speaker_id, q.speaker_id, secs(wave, q.wave, encoder),
                   secs(wave, s.wave, encoder)});
  }
  return out;
}

}  // namespace ascl::eval
