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


#ifndef ASCL_TRAIN_TRAINER_H_
#define ASCL_TRAIN_TRAINER_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ascl/consistency/discriminator.h"
#include "ascl/data/episode.h"
#include "ascl/data/tokenizer.h"
#include "ascl/gen/model.h"
#include "ascl/matrix.h"
#include "ascl/nn/adam.h"
#include "ascl/rng.h"
#include "ascl/speaker/speaker_encoder.h"
#include "ascl/train/config.h"

namespace ascl::train {

struct StepRecord {
  int64_t step = 0;  // 1-based index of the completed step
  double d_loss = 0.0;
  double g_ascl = 0.0;
  double recon = 0.0;
  double kl = 0.0;
  double duration = 0.0;
  double wall_ms = 0.0;
};

inline constexpr const char* kMetricsHeader = "step,d_loss,g_ascl,recon,kl,duration,wall_ms";
std::string format_record(const StepRecord& record);

// Loss values of one generator pass over one episode, exposed for tests.
struct EpisodeLosses {
  nn::Tensor recon;
  nn::Tensor kl;
  nn::Tensor duration;
  nn::Tensor ascl;     // generator-side adversarial loss
  nn::Tensor fake_s;   // D(y~_s, g_s) scores of the current discriminator
  nn::Tensor fake_q;
  nn::Tensor y_hat_s;  // decoded ASCL fakes
  nn::Tensor y_hat_q;
  nn::Tensor real_s;   // real waveform segments
  nn::Tensor real_q;
  speaker::SpeakerEmbedding g_s;
  speaker::SpeakerEmbedding g_q;
};

// Per-utterance features that never change during training.
struct UtteranceFeatures {
  Matrix linear;
  Matrix mel;
  speaker::RawSpeakerEmbedding raw{std::vector<double>(speaker::kRawEmbeddingDim, 0.0)};
};

// Owns the generator, discriminator, both optimizers and the single rng
// stream of a run. Every random draw of a step (episodes, posterior noise,
// segment offsets) comes from that stream, in a fixed order.
class Trainer {
 public:
  Trainer(const TrainConfig& config, std::shared_ptr<const data::AudioCorpus> paired,
          std::shared_ptr<const data::AudioCorpus> untranscribed, data::Alphabet alphabet,
          std::shared_ptr<const speaker::SpeakerEncoder> encoder);

  // Samples batch_size episodes and runs one discriminator update followed
  // by one generator update. Throws NonFiniteLoss (after writing a
  // diagnostic file when a diagnostic directory is set).
  StepRecord step();
  StepRecord train_step(const std::vector<data::EpisodeTuple>& batch);

  // Builds the generator-side losses of one episode, drawing the posterior
  // noise and segment offsets from rng(). Leaves gradients untouched. The
  // discriminator scores (fake_*, ascl) are skipped when score_fakes is off.
  EpisodeLosses episode_losses(const data::EpisodeTuple& episode, bool score_fakes = true);

  std::vector<data::EpisodeTuple> sample_batch();

  // The two halves of train_step. The discriminator update touches only
  // discriminator parameters and returns the batch-mean d_loss; the
  // generator update touches only generator parameters and fills the
  // generator-side fields of record (false, with no update, when the
  // weighted total is not finite).
  double update_discriminator(const std::vector<EpisodeLosses>& losses);
  bool update_generator(const std::vector<EpisodeLosses>& losses, StepRecord& record);

  int64_t steps_done() const { return step_; }
  const TrainConfig& config() const { return config_; }
  gen::VitsModel& model() { return model_; }
  const gen::VitsModel& model() const { return model_; }
  consistency::SpeakerConsistencyDiscriminator& discriminator() { return disc_; }
  Rng& rng() { return rng_; }
  nn::Adam& g_optimizer() { return *g_opt_; }
  nn::Adam& d_optimizer() { return *d_opt_; }
  const data::Alphabet& alphabet() const { return alphabet_; }

  // lr at the start of the given (0-based) step.
  double lr_g_at(int64_t step) const;
  double lr_d_at(int64_t step) const;

  void set_diagnostic_dir(std::filesystem::path dir) { diagnostic_dir_ = std::move(dir); }
  void set_manifest_paths(std::string paired, std::string untranscribed) {
    paired_manifest_ = std::move(paired);
    untranscribed_manifest_ = std::move(untranscribed);
  }

  // Everything needed for an identical continuation: parameters, optimizer
  // moments, rng state, step count, plus the frozen encoder weights.
  void save_checkpoint(const std::filesystem::path& path) const;
  void load_checkpoint(const std::filesystem::path& path);

  const UtteranceFeatures& features(const data::Utterance& utt);

 private:
  void check_finite(const StepRecord& r, const std::vector<data::EpisodeTuple>& batch) const;

  TrainConfig config_;
  std::shared_ptr<const data::AudioCorpus> paired_;
  std::shared_ptr<const data::AudioCorpus> untranscribed_;
  data::Alphabet alphabet_;
  std::shared_ptr<const speaker::SpeakerEncoder> encoder_;
  Rng rng_;
  gen::VitsModel model_;
  consistency::SpeakerConsistencyDiscriminator disc_;
  std::unique_ptr<nn::Adam> g_opt_;
  std::unique_ptr<nn::Adam> d_opt_;
  int64_t step_ = 0;
  int64_t steps_per_epoch_ = 1;
  std::map<const data::Utterance*, UtteranceFeatures> cache_;
  std::optional<std::filesystem::path> diagnostic_dir_;
  std::string paired_manifest_;
  std::string untranscribed_manifest_;
};

// Parameters of the shared model checkpoint format.
struct LoadedModel {
  TrainConfig config;
  gen::VitsModel model;
  data::Alphabet alphabet;
  std::set<std::string> training_speakers;  // paired and untranscribed
  std::string paired_manifest;
  std::string untranscribed_manifest;
  uint64_t encoder_checksum = 0;
  std::shared_ptr<const speaker::StandInSpeakerEncoder> encoder;
  int64_t step = 0;
};

// Restores the generator (and the frozen encoder stored alongside it) for
// inference. Throws CheckpointError on a malformed archive.
LoadedModel load_model(const std::filesystem::path& checkpoint);

}  // namespace ascl::train

#endif  // ASCL_TRAIN_TRAINER_H_
