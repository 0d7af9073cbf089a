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


#ifndef ASCL_TRAIN_CONFIG_H_
#define ASCL_TRAIN_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>

#include "ascl/consistency/discriminator.h"
#include "ascl/gen/config.h"

namespace ascl::train {

struct LossWeights {
  double recon = 45.0;
  double kl = 1.0;
  double duration = 1.0;
  double ascl = 1.0;
};

struct TrainConfig {
  // [run]
  int64_t steps = 2000;
  int batch_size = 1;
  uint64_t seed = 0;
  int64_t checkpoint_every = 500;
  int64_t log_every = 50;
  // When false, wall_ms is logged as 0 so that metrics files from equal
  // seeds are byte-identical.
  bool log_wall_time = true;
  // [optim]
  double lr_g = 2e-4;
  double lr_d = 2e-4;
  double beta1 = 0.8;
  double beta2 = 0.99;
  double eps = 1e-9;
  double lr_decay = 0.999;  // per epoch-equivalent
  // [loss]
  double alpha = consistency::kDefaultAlpha;
  LossWeights weights;
  // [model], [discriminator]
  gen::ModelConfig model;
  consistency::DiscriminatorConfig discriminator;
};

// Flat key = value lines grouped under [section] headers; '#' and ';' start
// comments. Unknown sections or keys and malformed values raise ConfigError.
//
//   [run]           steps batch_size seed checkpoint_every log_every log_wall_time
//   [optim]         lr_g lr_d beta1 beta2 eps lr_decay
//   [loss]          alpha recon kl duration ascl
//   [model]         latent_channels hidden_channels text_layers flow_layers
//                   flow_hidden flow_kernel decoder_channels decoder_stages
//                   duration_hidden segment_frames noise_scale max_token_frames
//   [discriminator] channels groups   (comma-separated, six entries each)
TrainConfig parse_train_config(const std::string& text);
TrainConfig load_train_config(const std::filesystem::path& path);
std::string to_ini(const TrainConfig& config);

// Positive counts and rates, alpha in (0, 1], consistent sub-configs.
void validate(const TrainConfig& config);

}  // namespace ascl::train

#endif  // ASCL_TRAIN_CONFIG_H_
