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


#ifndef ASCL_TRAIN_RUN_H_
#define ASCL_TRAIN_RUN_H_

#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include "ascl/train/config.h"
#include "ascl/train/trainer.h"

namespace ascl::train {

struct RunOptions {
  std::filesystem::path out_dir;
  std::filesystem::path alphabet;  // defaults to alphabet.txt beside the paired manifest
  std::optional<std::filesystem::path> resume_from;
  std::shared_ptr<const speaker::SpeakerEncoder> encoder;  // defaults to the shipped one
  // Called every log_every steps and on the last step.
  std::function<void(const StepRecord&)> on_log;
};

// Checkpoint file for a step: <out_dir>/ckpt_000500.ckpt.
std::filesystem::path checkpoint_path(const std::filesystem::path& out_dir, int64_t step);

// Runs config.steps training steps. Writes ckpt_000000 before the first
// step, then every checkpoint_every steps and at the end, and appends one
// metrics.csv row per step. With resume_from, state is restored from that
// checkpoint, metrics rows past its step are dropped, and the run continues
// to config.steps. Returns the final checkpoint path.
std::filesystem::path run_training(const TrainConfig& config,
                                   const std::filesystem::path& paired_manifest,
                                   const std::filesystem::path& untranscribed_manifest,
                                   const RunOptions& options);

}  // namespace ascl::train

#endif  // ASCL_TRAIN_RUN_H_
