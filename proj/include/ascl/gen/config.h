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

#ifndef ASCL_GEN_CONFIG_H_
#define ASCL_GEN_CONFIG_H_

namespace ascl::gen {

struct ModelConfig {
  int vocab_size = 0;  // alphabet size + 1 (UNK)
  int latent_channels = 16;
  int hidden_channels = 64;
  int text_layers = 2;
  int flow_layers = 4;
  int flow_hidden = 32;
  int flow_kernel = 5;
  int decoder_channels = 64;
  int decoder_stages = 4;  // upsampling factor 256^(1/stages) per stage
  int duration_hidden = 64;
  int segment_frames = 16;
  double noise_scale = 0.667;
  // Cap on a single predicted token duration at inference, in frames.
  int max_token_frames = 200;
};

// Throws ConfigError on inconsistent settings.
void validate(const ModelConfig& config);

}  // namespace ascl::gen

#endif  // ASCL_GEN_CONFIG_H_
