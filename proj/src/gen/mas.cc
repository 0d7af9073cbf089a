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

#include "ascl/gen/mas.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ascl/error.h"
#include "ascl/nn/ops.h"

namespace ascl::gen {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
const double kHalfLog2Pi = 0.5 * std::log(2.0 * std::numbers::pi);
}  // namespace

Matrix frame_log_likelihood(const PriorStats& prior, const nn::Tensor& z_f) {
  const int64_t d = prior.mean.dim(0);
  const int64_t n = prior.mean.dim(1);
  if (z_f.dim(0) != d) {
    throw Error(ErrorKind::kShapeMismatch, "latent channels differ from prior channels");
  }
  const int64_t t = z_f.dim(1);
  Matrix ll(n, t);
  auto m = prior.mean.data();
  auto s = prior.log_std.data();
  auto z = z_f.data();
  for (int64_t i = 0; i < n; ++i) {
    for (int64_t j = 0; j < t; ++j) {
      double acc = 0.0;
      for (int64_t c = 0; c < d; ++c) {
        const double ls = s[c * n + i];
        const double diff = (z[c * t + j] - m[c * n + i]) * std::exp(-ls);
        acc += -ls - kHalfLog2Pi - 0.5 * diff * diff;
      }
      ll.at(i, j) = acc;
    }
  }
  return ll;
}

Alignment mas_align(const Matrix& ll) {
  const int64_t n = ll.rows;
  const int64_t t = ll.cols;
  if (n < 1) throw Error(ErrorKind::kEmptyText, "alignment needs at least one token");
  if (t < n) {
    throw Error(ErrorKind::kTooFewFrames, std::to_string(t) + " frames for " +
                                              std::to_string(n) + " tokens");
  }
  // q(i, j): best score of frames 0..j ending on token i.
  Matrix q(n, t, kNegInf);
  q.at(0, 0) = ll.at(0, 0);
  for (int64_t j = 1; j < t; ++j) {
    const int64_t lo = std::max<int64_t>(0, n - (t - j));
    const int64_t hi = std::min<int64_t>(n - 1, j);
    for (int64_t i = lo; i <= hi; ++i) {
      const double stay = q.at(i, j - 1);
      const double advance = i > 0 ? q.at(i - 1, j - 1) : kNegInf;
      q.at(i, j) = std::max(stay, advance) + ll.at(i, j);
    }
  }
  Alignment a;
  a.token_of_frame.assign(t, 0);
  int64_t i = n - 1;
  for (int64_t j = t - 1; j >= 0; --j) {
    a.token_of_frame[j] = i;
    if (j == 0) break;
    if (i > 0 && (i == j || q.at(i - 1, j - 1) > q.at(i, j - 1))) --i;
  }
  return a;
}

Alignment mas_align(const PriorStats& prior, const LatentSequence& z_f) {
  return mas_align(frame_log_likelihood(prior, z_f.frames));
}

double alignment_score(const Matrix& ll, const Alignment& a) {
  double acc = 0.0;
  for (size_t j = 0; j < a.token_of_frame.size(); ++j) acc += ll.at(a.token_of_frame[j], j);
  return acc;
}

bool is_valid_alignment(const Alignment& a, int64_t num_tokens) {
  const auto& f = a.token_of_frame;
  if (f.empty() || f.front() != 0 || f.back() != num_tokens - 1) return false;
  for (size_t j = 1; j < f.size(); ++j) {
    const int64_t step = f[j] - f[j - 1];
    if (step != 0 && step != 1) return false;
  }
  return true;
}

Durations durations_of(const Alignment& a, int64_t num_tokens) {
  Durations d;
  d.frames.assign(num_tokens, 0);
  for (int64_t tok : a.token_of_frame) {
    if (tok < 0 || tok >= num_tokens) {
      throw Error(ErrorKind::kShapeMismatch, "alignment token out of range");
    }
    ++d.frames[tok];
  }
  return d;
}

Alignment alignment_from_durations(const Durations& durations) {
  Alignment a;
  for (size_t i = 0; i < durations.frames.size(); ++i) {
    for (int64_t k = 0; k < durations.frames[i]; ++k) {
      a.token_of_frame.push_back(static_cast<int64_t>(i));
    }
  }
  return a;
}

PriorStats expand_prior(const PriorStats& prior, const Alignment& a) {
  return {nn::gather_cols(prior.mean, a.token_of_frame),
          nn::gather_cols(prior.log_std, a.token_of_frame)};
}

}  // namespace ascl::gen
