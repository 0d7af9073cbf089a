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

#include "ascl/data/features.h"
#include "ascl/gen/losses.h"
#include "ascl/nn/ops.h"
#include "doctest.h"
#include "test_support.h"

using namespace ascl;
using ascl::testing::normals;

namespace {

gen::PosteriorSample sample(const gen::PosteriorStats& stats, Rng& rng) {
  gen::PosteriorSample s;
  s.stats = stats;
  s.noise = normals(rng, static_cast<size_t>(stats.mean.numel()));
  s.z_v.frames = nn::add(stats.mean, nn::mul(nn::exp(stats.log_std),
                                             nn::Tensor(stats.mean.shape(), s.noise)));
  return s;
}

gen::FlowOutput identity_flow(const gen::PosteriorSample& s) {
  return {{s.z_v.frames, gen::LatentRole::kZf}, nn::Tensor::scalar(0.0)};
}

// KL(N(mu0, s0^2) || N(mu1, s1^2)) summed over entries, divided by frames.
double closed_form_kl(const gen::PosteriorStats& q, const gen::PriorStats& p) {
  double kl = 0.0;
  for (int64_t i = 0; i < q.mean.numel(); ++i) {
    const double l0 = q.log_std.at(i), l1 = p.log_std.at(i);
    const double m0 = q.mean.at(i), m1 = p.mean.at(i);
    kl += l1 - l0 + (std::exp(2 * l0) + (m0 - m1) * (m0 - m1)) / (2 * std::exp(2 * l1)) - 0.5;
  }
  return kl / static_cast<double>(q.mean.dim(1));
}

}  // namespace

TEST_CASE("KL of identical Gaussians averages to zero") {
  Rng rng(1);
  const int64_t d = 4, t = 3;
  const nn::Tensor mean({d, t}, normals(rng, d * t));
  const nn::Tensor log_std({d, t}, normals(rng, d * t, 0.3));
  const gen::PosteriorStats q{mean, log_std};
  const gen::PriorStats p{mean, log_std};
  const int n = 10000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto s = sample(q, rng);
    const double v = gen::kl_loss(s, p, identity_flow(s)).item();
    sum += v;
    sum2 += v * v;
  }
  const double m = sum / n;
  const double sd = std::sqrt(sum2 / n - m * m);
  CHECK(std::abs(m) <= 3.0 * sd / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("single-sample KL matches the closed form within 2% over 1e5 draws") {
  Rng rng(2);
  const int64_t d = 4, t = 2;
  const gen::PosteriorStats q{nn::Tensor({d, t}, normals(rng, d * t)),
                              nn::Tensor({d, t}, normals(rng, d * t, 0.4))};
  const gen::PriorStats p{nn::Tensor({d, t}, normals(rng, d * t)),
                          nn::Tensor({d, t}, normals(rng, d * t, 0.4))};
  const int n = 100000;
  double sum = 0.0;
  nn::NoGradGuard no_grad;
  for (int i = 0; i < n; ++i) {
    const auto s = sample(q, rng);
    sum += gen::kl_loss(s, p, identity_flow(s)).item();
  }
  const double expected = closed_form_kl(q, p);
  CHECK(expected > 0.1);
  CHECK(std::abs(sum / n - expected) / expected < 0.02);
}

TEST_CASE("KL subtracts the flow log-determinant per frame") {
  Rng rng(3);
  const gen::PosteriorStats q{nn::Tensor({2, 4}, normals(rng, 8)), nn::Tensor({2, 4}, 0.0)};
  const gen::PriorStats p{nn::Tensor({2, 4}, 0.0), nn::Tensor({2, 4}, 0.0)};
  const auto s = sample(q, rng);
  const double base = gen::kl_loss(s, p, identity_flow(s)).item();
  const gen::FlowOutput shifted{{s.z_v.frames, gen::LatentRole::kZf}, nn::Tensor::scalar(2.0)};
  CHECK(gen::kl_loss(s, p, shifted).item() == doctest::Approx(base - 2.0 / 4.0));
}

TEST_CASE("KL gradient matches finite differences") {
  Rng rng(4);
  nn::Tensor qm = nn::Tensor::parameter({2, 3}, normals(rng, 6));
  nn::Tensor ql = nn::Tensor::parameter({2, 3}, normals(rng, 6, 0.3));
  nn::Tensor pm = nn::Tensor::parameter({2, 3}, normals(rng, 6));
  nn::Tensor pl = nn::Tensor::parameter({2, 3}, normals(rng, 6, 0.3));
  const auto noise = normals(rng, 6);
  auto loss = [&] {
    gen::PosteriorSample s;
    s.stats = {qm, ql};
    s.noise = noise;
    s.z_v.frames = nn::add(qm, nn::mul(nn::exp(ql), nn::Tensor({2, 3}, noise)));
    return gen::kl_loss(s, {pm, pl}, identity_flow(s));
  };
  loss().backward();
  for (nn::Tensor* t : {&qm, &ql, &pm, &pl}) {
    const auto g = t->grad();
    for (int64_t i = 0; i < 6; ++i) {
      const double fd = ascl::testing::finite_difference([&] { return loss().item(); }, *t, i, 1e-6);
      CHECK(g[i] == doctest::Approx(fd).epsilon(1e-6).scale(1e-8));
    }
  }
}

TEST_CASE("reconstruction loss is zero for a perfect reconstruction") {
  Rng rng(5);
  const nn::Tensor wave({256 * 5}, normals(rng, 256 * 5, 0.2));
  const nn::Tensor target = data::log_mel_tensor(wave).detach();
  CHECK(gen::recon_loss(wave, target).item() == 0.0);
  const nn::Tensor other({256 * 5}, normals(rng, 256 * 5, 0.2));
  CHECK(gen::recon_loss(other, target).item() > 0.0);
}

TEST_CASE("reconstruction loss is the mean absolute log-mel difference") {
  Rng rng(6);
  const nn::Tensor a({256 * 3}, normals(rng, 256 * 3, 0.2));
  const nn::Tensor b({256 * 3}, normals(rng, 256 * 3, 0.2));
  const nn::Tensor ma = data::log_mel_tensor(a), mb = data::log_mel_tensor(b);
  double expect = 0.0;
  for (int64_t i = 0; i < ma.numel(); ++i) expect += std::abs(ma.at(i) - mb.at(i));
  expect /= static_cast<double>(ma.numel());
  CHECK(gen::recon_loss(a, mb.detach()).item() == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("reconstruction loss gradient matches finite differences") {
  Rng rng(7);
  nn::Tensor w = nn::Tensor::parameter({256 * 2}, normals(rng, 256 * 2, 0.2));
  const nn::Tensor target({80, 2}, normals(rng, 160));
  gen::recon_loss(w, target).backward();
  const auto g = w.grad();
  for (int64_t i : {int64_t{3}, int64_t{200}, int64_t{511}}) {
    const double fd = ascl::testing::finite_difference(
        [&] { return gen::recon_loss(w, target).item(); }, w, i, 1e-6);
    CHECK(g[i] == doctest::Approx(fd).epsilon(1e-4).scale(1e-7));
  }
}

TEST_CASE("duration loss is MSE in the log domain") {
  const nn::Tensor log_d({3}, {0.0, 1.0, std::log(2.0)});
  const gen::Durations target{{1, 4, 2}};
  const double e1 = 1.0 - std::log(4.0);
  CHECK(gen::duration_loss(log_d, target).item() == doctest::Approx(e1 * e1 / 3.0).epsilon(1e-12));
  const nn::Tensor exact({3}, {0.0, std::log(4.0), std::log(2.0)});
  CHECK(gen::duration_loss(exact, target).item() == doctest::Approx(0.0));
}
