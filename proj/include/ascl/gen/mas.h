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

#ifndef ASCL_GEN_MAS_H_
#define ASCL_GEN_MAS_H_

#include <cstdint>

#include "ascl/gen/types.h"
#include "ascl/matrix.h"

namespace ascl::gen {

// ll(i, j) = sum_d log N(z[d, j]; mean[d, i], exp(log_std[d, i])), [T_text x T].
Matrix frame_log_likelihood(const PriorStats& prior, const nn::Tensor& z_f);

// Monotonic alignment search. Maximizes the summed log-likelihood over all
// monotone surjective alignments; on ties the backtrace stays on the current
// token. Throws TooFewFrames when T < T_text.
Alignment mas_align(const Matrix& log_likelihood);
Alignment mas_align(const PriorStats& prior, const LatentSequence& z_f);

double alignment_score(const Matrix& log_likelihood, const Alignment& alignment);

// Monotone, starts at token 0, ends at the last token, no token skipped.
bool is_valid_alignment(const Alignment& alignment, int64_t num_tokens);

Durations durations_of(const Alignment& alignment, int64_t num_tokens);
Alignment alignment_from_durations(const Durations& durations);

// Per-frame prior statistics [D x T].
PriorStats expand_prior(const PriorStats& prior, const Alignment& alignment);

}  // namespace ascl::gen

#endif  // ASCL_GEN_MAS_H_
