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


#include "ascl/train/run.h"

#include <cstdio>
#include <fstream>
#include <vector>

#include "ascl/data/manifest.h"
#include "ascl/error.h"

namespace ascl::train {

namespace {

// Keeps the header and the rows with step <= last_step.
void truncate_metrics(const std::filesystem::path& path, int64_t last_step) {
  std::vector<std::string> kept;
  if (std::ifstream in{path}) {
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line == kMetricsHeader) continue;
      const int64_t step = std::stoll(line.substr(0, line.find(',')));
      if (step <= last_step) kept.push_back(line);
    }
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIoError, "cannot write " + path.string());
  out << kMetricsHeader << "\n";
  for (const auto& l : kept) out << l << "\n";
}

}  // namespace

std::filesystem::path checkpoint_path(const std::filesystem::path& out_dir, int64_t step) {
  char name[32];
  std::snprintf(name, sizeof(name), "ckpt_%06lld.ckpt", static_cast<long long>(step));
  return out_dir / name;
}

std::filesystem::path run_training(const TrainConfig& config,
                                   const std::filesystem::path& paired_manifest,
                                   const std::filesystem::path& untranscribed_manifest,
                                   const RunOptions& options) {
  validate(config);
  const auto paired_m = data::load_manifest(paired_manifest, data::CorpusKind::kPaired);
  const auto untr_m = data::load_manifest(untranscribed_manifest, data::CorpusKind::kUntranscribed);
  data::assert_disjoint_speakers(paired_m, untr_m);

  const std::filesystem::path alphabet_path =
      options.alphabet.empty() ? paired_manifest.parent_path() / "alphabet.txt" : options.alphabet;
  data::Alphabet alphabet = data::Alphabet::load(alphabet_path);
  auto paired = std::make_shared<const data::AudioCorpus>(paired_m, &alphabet);
  auto untranscribed = std::make_shared<const data::AudioCorpus>(untr_m, nullptr);
  auto encoder = options.encoder ? options.encoder
                                 : std::static_pointer_cast<const speaker::SpeakerEncoder>(
                                       speaker::default_speaker_encoder());

  Trainer trainer(config, paired, untranscribed, alphabet, encoder);
  trainer.set_manifest_paths(std::filesystem::absolute(paired_manifest).string(),
                             std::filesystem::absolute(untranscribed_manifest).string());
  std::filesystem::create_directories(options.out_dir);
  trainer.set_diagnostic_dir(options.out_dir);
  const auto metrics = options.out_dir / "metrics.csv";

  if (options.resume_from) {
    trainer.load_checkpoint(*options.resume_from);
    truncate_metrics(metrics, trainer.steps_done());
  } else {
    truncate_metrics(metrics, -1);
    trainer.save_checkpoint(checkpoint_path(options.out_dir, 0));
  }

  std::ofstream out(metrics, std::ios::app);
  if (!out) throw Error(ErrorKind::kIoError, "cannot append to " + metrics.string());
  std::filesystem::path last = checkpoint_path(options.out_dir, trainer.steps_done());
  while (trainer.steps_done() < config.steps) {
    const StepRecord rec = trainer.step();
    out << format_record(rec) << "\n";
    out.flush();
    if (options.on_log && (rec.step % config.log_every == 0 || rec.step == config.steps)) {
      options.on_log(rec);
    }
    if (rec.step % config.checkpoint_every == 0 || rec.step == config.steps) {
      last = checkpoint_path(options.out_dir, rec.step);
      trainer.save_checkpoint(last);
    }
  }
  if (!std::filesystem::exists(last)) trainer.save_checkpoint(last);
  return last;
}

}  // namespace ascl::train
