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
#include <sstream>

#include "ascl/error.h"
#include "ascl/io/archive.h"
#include "ascl/nn/ops.h"
#include "ascl/train/config.h"
#include "ascl/train/run.h"
#include "ascl/train/trainer.h"
#include "doctest.h"
#include "json.hpp"
#include "test_support.h"

using namespace ascl;
using ascl::testing::read_file;
using ascl::testing::scratch_dir;
namespace fs = std::filesystem;

namespace {

std::map<std::string, std::vector<double>> snapshot(const nn::NamedTensors& params) {
  std::map<std::string, std::vector<double>> out;
  for (const auto& p : params) out[p.name] = p.tensor.values();
  return out;
}

std::set<std::string> changed(const std::map<std::string, std::vector<double>>& before,
                              const nn::NamedTensors& params) {
  std::set<std::string> out;
  for (const auto& p : params) {
    if (before.at(p.name) != p.tensor.values()) out.insert(p.name);
  }
  return out;
}

std::string module_of(const std::string& name) { return name.substr(0, name.find('.')); }

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

struct Fixture {
  explicit Fixture(const std::string& name)
      : corpus(ascl::testing::tiny_corpus(name)), loaded(ascl::testing::load_corpus(corpus)) {}
  train::Trainer trainer(const train::TrainConfig& c) const {
    return train::Trainer(c, loaded.paired, loaded.untranscribed, loaded.alphabet,
                          speaker::default_speaker_encoder());
  }
  const synth::SyntheticCorpus& corpus;
  ascl::testing::LoadedCorpus loaded;
};

fs::path run(const Fixture& f, const train::TrainConfig& c, const fs::path& out,
             std::optional<fs::path> resume = std::nullopt) {
  train::RunOptions opt;
  opt.out_dir = out;
  opt.resume_from = std::move(resume);
  return train::run_training(c, f.corpus.paired_manifest, f.corpus.untranscribed_manifest, opt);
}

}  // namespace

TEST_CASE("config: defaults, INI round trip and rejection of bad input") {
  const train::TrainConfig d;
  CHECK(d.lr_g == 2e-4);
  CHECK(d.lr_d == 2e-4);
  CHECK(d.beta1 == 0.8);
  CHECK(d.beta2 == 0.99);
  CHECK(d.alpha == 0.3);
  CHECK(d.lr_decay == 0.999);

  auto c = ascl::testing::tiny_config();
  c.weights.recon = 12.5;
  c.discriminator.channels = {8, 16, 32, 32, 32, 32};
  c.discriminator.groups = {1, 2, 4, 4, 4, 4};
  const auto parsed = train::parse_train_config(train::to_ini(c));
  CHECK(train::to_ini(parsed) == train::to_ini(c));
  CHECK(parsed.weights.recon == 12.5);
  CHECK(parsed.discriminator.groups == c.discriminator.groups);

  auto kind = [](const std::string& text) {
    try {
      train::validate(train::parse_train_config(text));
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::kIoError;  // sentinel: accepted
  };
  CHECK(kind("[run]\nsteps = 3\n# comment\n; comment\n") == ErrorKind::kIoError);
  CHECK(kind("[run]\nbogus = 1\n") == ErrorKind::kConfigError);
  CHECK(kind("[nowhere]\n") == ErrorKind::kConfigError);
  CHECK(kind("[run]\nsteps = three\n") == ErrorKind::kConfigError);
  CHECK(kind("[loss]\nalpha = 0\n") == ErrorKind::kConfigError);
  CHECK(kind("[loss]\nalpha = 1.5\n") == ErrorKind::kConfigError);
  CHECK(kind("[loss]\nrecon = -1\n") == ErrorKind::kConfigError);
  CHECK(kind("[optim]\nlr_g = 0\n") == ErrorKind::kConfigError);
  CHECK(kind("[model]\nlatent_channels = 7\n") == ErrorKind::kOddChannels);
  CHECK(kind("[loss]\nascl = 0\n") == ErrorKind::kIoError);  // the ablation setting
  try {
    train::load_train_config("/nonexistent/config.ini");
    FAIL("expected MissingFile");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kMissingFile);
  }
}

TEST_CASE("trainer rejects overlapping and empty corpora") {
  Fixture f("train_reject");
  const auto enc = speaker::default_speaker_encoder();
  // The paired speakers reused as the untranscribed corpus.
  auto as_untranscribed = f.loaded.paired->manifest();
  as_untranscribed.kind = data::CorpusKind::kUntranscribed;
  for (auto& e : as_untranscribed.entries) e.text.reset();
  auto overlap = std::make_shared<const data::AudioCorpus>(as_untranscribed, nullptr);
  try {
    train::Trainer(ascl::testing::tiny_config(), f.loaded.paired, overlap, f.loaded.alphabet, enc);
    FAIL("expected SpeakerOverlap");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kSpeakerOverlap);
  }
  auto empty = std::make_shared<const data::AudioCorpus>();
  try {
    train::Trainer(ascl::testing::tiny_config(), f.loaded.paired, empty, f.loaded.alphabet, enc);
    FAIL("expected EmptyCorpus");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kEmptyCorpus);
  }
}

TEST_CASE("identically seeded trainers produce identical step records") {
  Fixture f("train_determinism");
  auto a = f.trainer(ascl::testing::tiny_config());
  auto b = f.trainer(ascl::testing::tiny_config());
  for (int i = 0; i < 3; ++i) {
    CHECK(train::format_record(a.step()) == train::format_record(b.step()));
  }
  auto c = ascl::testing::tiny_config();
  c.seed = 1;
  auto other = f.trainer(c);
  auto fresh = f.trainer(ascl::testing::tiny_config());
  CHECK(train::format_record(other.step()) != train::format_record(fresh.step()));
}

TEST_CASE("discriminator and generator updates touch disjoint parameter sets") {
  Fixture f("train_isolation");
  auto t = f.trainer(ascl::testing::tiny_config());
  // One full step first: at initialization the flow is the identity, so
  // nothing depends on the speaker head yet.
  t.step();
  const auto batch = t.sample_batch();
  std::vector<train::EpisodeLosses> losses;
  for (const auto& ep : batch) losses.push_back(t.episode_losses(ep, false));

  auto g_before = snapshot(t.model().parameters());
  auto d_before = snapshot(t.discriminator().parameters());
  t.update_discriminator(losses);
  CHECK(changed(g_before, t.model().parameters()).empty());
  CHECK(changed(d_before, t.discriminator().parameters()).size() ==
        t.discriminator().parameters().size());

  g_before = snapshot(t.model().parameters());
  d_before = snapshot(t.discriminator().parameters());
  train::StepRecord rec;
  CHECK(t.update_generator(losses, rec));
  CHECK(changed(d_before, t.discriminator().parameters()).empty());
  std::set<std::string> modules;
  for (const auto& name : changed(g_before, t.model().parameters())) modules.insert(module_of(name));
  CHECK(modules == std::set<std::string>{"head", "reference", "text", "posterior", "flow",
                                         "decoder", "duration"});
}

TEST_CASE("an adversarial-only generator step leaves gated modules untouched") {
  Fixture f("train_gating");
  auto c = ascl::testing::tiny_config();
  c.weights = {0.0, 0.0, 0.0, 1.0};
  auto t = f.trainer(c);
  const auto before = snapshot(t.model().parameters());
  for (int i = 0; i < 3; ++i) t.step();
  std::set<std::string> modules;
  for (const auto& name : changed(before, t.model().parameters())) modules.insert(module_of(name));
  CHECK(modules.count("posterior") == 0);
  CHECK(modules.count("text") == 0);
  CHECK(modules.count("duration") == 0);
  CHECK(modules.count("reference") == 0);
  CHECK(modules.count("flow") == 1);
  CHECK(modules.count("decoder") == 1);
}

TEST_CASE("learning rate decays once per epoch-equivalent") {
  Fixture f("train_lr");
  auto c = ascl::testing::tiny_config();
  c.lr_decay = 0.5;
  c.batch_size = 2;
  auto t = f.trainer(c);
  // Six paired utterances in batches of two: three steps per epoch.
  CHECK(t.lr_g_at(0) == 2e-4);
  CHECK(t.lr_g_at(2) == 2e-4);
  CHECK(t.lr_g_at(3) == doctest::Approx(1e-4).epsilon(1e-12));
  CHECK(t.lr_d_at(7) == doctest::Approx(0.5e-4).epsilon(1e-12));
}

TEST_CASE("frozen encoder is untouched by training") {
  Fixture f("train_frozen");
  const auto enc = speaker::default_speaker_encoder();
  const uint64_t before = enc->checksum();
  auto t = f.trainer(ascl::testing::tiny_config());
  for (int i = 0; i < 5; ++i) t.step();
  CHECK(enc->checksum() == before);
  CHECK(enc->checksum() == speaker::kShippedEncoderChecksum);
}

TEST_CASE("total generator loss gradient agrees with finite differences") {
  Fixture f("train_fd");
  auto t = f.trainer(ascl::testing::tiny_config());
  t.step();  // move away from the zero-initialized flow
  const auto ep = t.sample_batch()[0];
  const std::string state = t.rng().state();
  const auto& w = t.config().weights;
  auto total = [&]() {
    t.rng().set_state(state);
    const auto l = t.episode_losses(ep);
    return nn::add(nn::add(nn::scale(l.recon, w.recon), nn::scale(l.kl, w.kl)),
                   nn::add(nn::scale(l.duration, w.duration), nn::scale(l.ascl, w.ascl)));
  };
  auto params = t.model().parameters();
  for (auto& p : params) p.tensor.zero_grad();
  // Stop-gradient inputs are constants of the differentiated objective, so
  // the perturbed evaluations replay them at their base values.
  nn::DetachTape tape;
  total().backward();
  CHECK(tape.size() > 0);
  auto replayed = [&] {
    tape.replay();
    return total().item();
  };
  Rng pick(99);
  int checked = 0;
  for (int tries = 0; checked < 10 && tries < 200; ++tries) {
    auto& p = params[pick.index(params.size())];
    const int64_t i = static_cast<int64_t>(pick.index(static_cast<uint64_t>(p.tensor.numel())));
    const double g = p.tensor.grad()[i];
    if (std::abs(g) < 1e-4) continue;  // relative error is meaningless near zero
    const double fd = ascl::testing::finite_difference(replayed, p.tensor, i, 1e-3);
    CHECK_MESSAGE(std::abs(g - fd) <= 0.01 * std::abs(fd), p.name, "[", i, "] autodiff ", g, " fd ", fd);
    ++checked;
  }
  CHECK(checked == 10);
}

TEST_CASE("the detach tape reproduces stop-gradient semantics") {
  nn::Tensor p = nn::Tensor::parameter({1}, {2.0});
  // y = p * sg(p): dy/dp = sg(p) = 2, while d(p^2)/dp = 4.
  auto y = [&] { return nn::mul(p, p.detach()); };
  // Without the tape the stopped path is perturbed too.
  CHECK(ascl::testing::finite_difference([&] { return y().item(); }, p, 0, 1e-4) ==
        doctest::Approx(4.0));
  nn::DetachTape tape;
  y().backward();
  CHECK(p.grad()[0] == 2.0);
  auto replayed = [&] {
    tape.replay();
    return y().item();
  };
  CHECK(ascl::testing::finite_difference(replayed, p, 0, 1e-4) == doctest::Approx(2.0));
}

TEST_CASE("duration loss falls over 200 steps") {
  Fixture f("train_duration");
  auto c = ascl::testing::tiny_config();
  auto t = f.trainer(c);
  double first = 0.0, last = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double d = t.step().duration;
    if (i < 40) first += d;
    if (i >= 160) last += d;
  }
  CHECK(last < first);
}

TEST_CASE("non-finite losses abort with a diagnostic dump") {
  Fixture f("train_nonfinite");
  auto t = f.trainer(ascl::testing::tiny_config());
  const auto dir = scratch_dir("train_nonfinite_dump");
  t.set_diagnostic_dir(dir);
  auto params = t.model().parameters();
  for (auto& p : params) {
    if (p.name.rfind("decoder.post", 0) == 0) {
      for (double& v : p.tensor.mutable_data()) v = std::nan("");
    }
  }
  try {
    t.step();
    FAIL("expected NonFiniteLoss");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kNonFiniteLoss);
  }
  CHECK(fs::exists(dir / "nonfinite_step_1.json"));
  const auto dump = nlohmann::json::parse(read_file(dir / "nonfinite_step_1.json"));
  CHECK(dump.is_object());
}

TEST_CASE("run_training: zero steps, row counts, checkpoint contents") {
  Fixture f("train_run");
  const auto root = scratch_dir("train_run_out");
  auto c = ascl::testing::tiny_config();
  c.steps = 0;
  const auto p0 = run(f, c, root / "zero");
  CHECK(p0 == train::checkpoint_path(root / "zero", 0));
  CHECK(p0.filename() == "ckpt_000000.ckpt");
  int ckpts = 0;
  for (const auto& e : fs::directory_iterator(root / "zero")) ckpts += e.path().extension() == ".ckpt";
  CHECK(ckpts == 1);
  CHECK(lines_of(read_file(root / "zero" / "metrics.csv")).size() == 1);

  c.steps = 5;
  const auto p5 = run(f, c, root / "five");
  const auto rows = lines_of(read_file(root / "five" / "metrics.csv"));
  REQUIRE(rows.size() == 6);
  CHECK(rows[0] == train::kMetricsHeader);
  for (int i = 1; i <= 5; ++i) CHECK(rows[i].rfind(std::to_string(i) + ",", 0) == 0);
  for (int s : {0, 2, 4, 5}) CHECK(fs::exists(train::checkpoint_path(root / "five", s)));

  const auto ar = io::read_archive(p5);
  const auto meta = nlohmann::json::parse(ar.metadata_json);
  CHECK(meta.at("step") == 5);
  CHECK(meta.at("encoder_checksum") == io::to_hex(speaker::kShippedEncoderChecksum));
  for (const char* key : {"format", "version", "config", "rng_state", "paired_speakers",
                          "untranscribed_speakers", "alphabet"}) {
    CHECK(meta.contains(key));
  }
  bool has[4] = {false, false, false, false};
  for (const auto& [name, t] : ar.tensors) {
    has[0] |= name.rfind("generator.", 0) == 0;
    has[1] |= name.rfind("discriminator.", 0) == 0;
    has[2] |= name.rfind("speaker_encoder.", 0) == 0;
    has[3] |= name.rfind("optim.", 0) == 0;
  }
  for (bool h : has) CHECK(h);

  const auto lm = train::load_model(p5);
  CHECK(lm.step == 5);
  CHECK(lm.model.trained_steps == 5);
  CHECK(lm.encoder->checksum() == speaker::kShippedEncoderChecksum);
  CHECK(lm.training_speakers.size() == 5);
}

TEST_CASE("metrics files of identical runs are byte-identical") {
  Fixture f("train_bytes");
  const auto root = scratch_dir("train_bytes_out");
  const auto c = ascl::testing::tiny_config();
  run(f, c, root / "a");
  run(f, c, root / "b");
  CHECK(read_file(root / "a" / "metrics.csv") == read_file(root / "b" / "metrics.csv"));
  CHECK(read_file(root / "a" / "ckpt_000004.ckpt") == read_file(root / "b" / "ckpt_000004.ckpt"));
}

TEST_CASE("resuming from a checkpoint reproduces the uninterrupted run") {
  Fixture f("train_resume");
  const auto root = scratch_dir("train_resume_out");
  auto c = ascl::testing::tiny_config();
  c.steps = 6;
  run(f, c, root / "full");
  auto half = c;
  half.steps = 2;
  run(f, half, root / "split");
  run(f, c, root / "split", train::checkpoint_path(root / "split", 2));
  CHECK(read_file(root / "full" / "metrics.csv") == read_file(root / "split" / "metrics.csv"));
  CHECK(read_file(root / "full" / "ckpt_000006.ckpt") == read_file(root / "split" / "ckpt_000006.ckpt"));

  // Resuming from an earlier checkpoint than the last row drops the later rows.
  run(f, c, root / "split", train::checkpoint_path(root / "split", 4));
  CHECK(read_file(root / "full" / "metrics.csv") == read_file(root / "split" / "metrics.csv"));
}

TEST_CASE("checkpoint from another encoder or a corrupt file is rejected") {
  Fixture f("train_badckpt");
  const auto root = scratch_dir("train_badckpt_out");
  const auto p = run(f, ascl::testing::tiny_config(), root);
  auto ar = io::read_archive(p);
  auto meta = nlohmann::json::parse(ar.metadata_json);
  meta["encoder_checksum"] = "0000000000000000";
  ar.metadata_json = meta.dump();
  io::write_archive(root / "other_encoder.ckpt", ar);
  auto t = f.trainer(ascl::testing::tiny_config());
  CHECK_THROWS_AS(t.load_checkpoint(root / "other_encoder.ckpt"), Error);
  CHECK_THROWS_AS(train::load_model(root / "other_encoder.ckpt"), Error);
  std::ofstream(root / "garbage.ckpt") << "not an archive";
  try {
    train::load_model(root / "garbage.ckpt");
    FAIL("expected CheckpointError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kCheckpointError);
  }
}
