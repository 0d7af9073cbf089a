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


#ifndef ASCL_GEN_LOSSES_H_
#define ASCL_GEN_LOSSES_H_

#include "ascl/gen/types.h"
#include "ascl/nn/tensor.h"

namespace ascl::gen {

// Single-sample estimate of KL(q(z_v|y) || p(z_f|x)) in flow space,
//   log q(z_v) - log p(f(z_v)) - log|det df/dz_v|,
// summed over channels and averaged over frames. The Gaussian constants
// cancel and are omitted.
nn::Tensor kl_loss(const PosteriorSample& posterior, const PriorStats& expanded_prior,
                   const FlowOutput& flow);

// Mean absolute log-mel difference; mel_target is [80 x T], wave [256 T].
nn::Tensor recon_loss(const nn::Tensor& wave, const nn::Tensor& mel_target);

// Mean squared error between predicted and target log-durations.
nn::Tensor duration_loss(const nn::Tensor& log_durations, const Durations& target);

}  // namespace ascl::gen

#endif  // ASCL_GEN_LOSSES_H_
