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


#include <cmath>
#include <functional>
#include <numbers>

#include "ascl/error.h"
#include "ascl/gen/mas.h"
#include "doctest.h"
#include "test_support.h"

using namespace ascl;

namespace {

Matrix random_ll(Rng& rng, int64_t n, int64_t t) {
  Matrix m(n, t);
  for (double& v : m.data) v = rng.uniform(-5.0, 0.0);
  return m;
}

// Best score over every monotone surjective alignment, by enumerating all
// ways to split t frames into n non-empty consecutive runs.
double brute_force_best(const Matrix& ll) {
  const int64_t n = ll.rows, t = ll.cols;
  double best = -std::numeric_limits<double>::infinity();
  std::vector<int64_t> tok(t);
  std::function<void(int64_t, int64_t)> rec = [&](int64_t frame, int64_t token) {
    if (frame == t) {
      if (token != n - 1) return;
      double s = 0.0;
      for (int64_t j = 0; j < t; ++j) s += ll.at(tok[j], j);
      best = std::max(best, s);
      return;
    }
    // Frame 0 must be token 0; later frames stay or advance by one.
    for (int64_t next : {token, token + 1}) {
      if (frame == 0 && next != 0) continue;
      if (next >= n) continue;
      tok[frame] = next;
      rec(frame + 1, next);
    }
  };
  rec(0, 0);
  return best;
}

}  // namespace

TEST_CASE("single token takes every frame") {
  Rng rng(1);
  const auto a = gen::mas_align(random_ll(rng, 1, 7));
  CHECK(a.token_of_frame == std::vector<int64_t>(7, 0));
}

TEST_CASE("equal lengths force the identity alignment") {
  Rng rng(2);
  for (int64_t n = 1; n <= 6; ++n) {
    const auto a = gen::mas_align(random_ll(rng, n, n));
    for (int64_t j = 0; j < n; ++j) CHECK(a.token_of_frame[j] == j);
  }
}

TEST_CASE("fewer frames than tokens is rejected") {
  Rng rng(3);
  try {
    gen::mas_align(random_ll(rng, 4, 3));
    FAIL("expected TooFewFrames");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kTooFewFrames);
  }
}

TEST_CASE("DP matches exhaustive search on 200 random small instances") {
  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const int64_t n = 1 + static_cast<int64_t>(rng.index(4));
    const int64_t t = n + static_cast<int64_t>(rng.index(static_cast<size_t>(7 - n)));
    const Matrix ll = random_ll(rng, n, t);
    const auto a = gen::mas_align(ll);
    REQUIRE(a.token_of_frame.size() == static_cast<size_t>(t));
    CHECK(gen::is_valid_alignment(a, n));
    CHECK(gen::alignment_score(ll, a) == doctest::Approx(brute_force_best(ll)).epsilon(1e-12));
  }
}

TEST_CASE("ties keep the current token during the backtrace") {
  const Matrix flat(3, 6, -1.0);
  const auto a = gen::mas_align(flat);
  CHECK(a.token_of_frame == std::vector<int64_t>{0, 1, 2, 2, 2, 2});
}

TEST_CASE("validity predicate") {
  CHECK(gen::is_valid_alignment({{0, 0, 1, 2}}, 3));
  CHECK_FALSE(gen::is_valid_alignment({{0, 2, 2}}, 3));     // skips token 1
  CHECK_FALSE(gen::is_valid_alignment({{0, 1, 0, 2}}, 3));  // not monotone
  CHECK_FALSE(gen::is_valid_alignment({{1, 1, 2}}, 3));     // does not start at 0
  CHECK_FALSE(gen::is_valid_alignment({{0, 1, 1}}, 3));     // misses the last token
}

TEST_CASE("durations and alignments convert both ways") {
  const gen::Alignment a{{0, 0, 0, 1, 2, 2}};
  const auto d = gen::durations_of(a, 3);
  CHECK(d.frames == std::vector<int64_t>{3, 1, 2});
  CHECK(gen::alignment_from_durations(d).token_of_frame == a.token_of_frame);
}

TEST_CASE("frame log-likelihood equals the diagonal Gaussian log density") {
  Rng rng(5);
  const int64_t d = 3, n = 2, t = 4;
  const gen::PriorStats prior{nn::Tensor({d, n}, ascl::testing::normals(rng, d * n)),
                              nn::Tensor({d, n}, ascl::testing::normals(rng, d * n, 0.5))};
  const nn::Tensor z({d, t}, ascl::testing::normals(rng, d * t));
  const Matrix ll = gen::frame_log_likelihood(prior, z);
  REQUIRE(ll.rows == n);
  REQUIRE(ll.cols == t);
  for (int64_t i = 0; i < n; ++i) {
    for (int64_t j = 0; j < t; ++j) {
      double expect = 0.0;
      for (int64_t c = 0; c < d; ++c) {
        const double mu = prior.mean.at(c, i), sigma = std::exp(prior.log_std.at(c, i));
        const double x = z.at(c, j);
        expect += -0.5 * std::log(2.0 * std::numbers::pi) - std::log(sigma) -
                  0.5 * (x - mu) * (x - mu) / (sigma * sigma);
      }
      CHECK(ll.at(i, j) == doctest::Approx(expect).epsilon(1e-12));
    }
  }
}

TEST_CASE("expand_prior repeats each token column over its frames") {
  Rng rng(6);
  const gen::PriorStats prior{nn::Tensor({2, 3}, ascl::testing::normals(rng, 6)),
                              nn::Tensor({2, 3}, ascl::testing::normals(rng, 6))};
  const gen::Alignment a{{0, 1, 1, 2}};
  const auto e = gen::expand_prior(prior, a);
  CHECK(e.mean.shape() == nn::Shape{2, 4});
  for (int64_t c = 0; c < 2; ++c) {
    for (int64_t j = 0; j < 4; ++j) {
      CHECK(e.mean.at(c, j) == prior.mean.at(c, a.token_of_frame[j]));
      CHECK(e.log_std.at(c, j) == prior.log_std.at(c, a.token_of_frame[j]));
    }
  }
}
