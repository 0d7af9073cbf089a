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


#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>
#include <sys/wait.h>

#include "ascl/cli/cli.h"
#include "ascl/data/audio.h"
#include "ascl/data/features.h"
#include "ascl/eval/secs.h"
#include "ascl/train/run.h"
#include "doctest.h"
#include "json.hpp"
#include "test_support.h"

using namespace ascl;
using ascl::testing::read_file;
using ascl::testing::scratch_dir;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

Result cli_run(std::vector<std::string> args) {
  args.insert(args.begin(), "ascl");
  std::ostringstream out, err;
  Result r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string l; std::getline(ss, l);) out.push_back(l);
  return out;
}

std::string field(const std::string& printout, const std::string& key) {
  for (const auto& l : lines_of(printout)) {
    if (l.rfind(key + ": ", 0) == 0) return l.substr(key.size() + 2);
  }
  return {};
}

struct Workspace {
  fs::path root;
  synth::SyntheticCorpus corpus;
  fs::path config;
  fs::path checkpoint;
  fs::path untrained;
};

// A tiny corpus, config file, and a trained checkpoint made through the CLI.
const Workspace& workspace() {
  static const Workspace ws = [] {
    Workspace w;
    w.root = scratch_dir("cli");
    w.corpus = ascl::testing::tiny_corpus("cli");
    auto c = ascl::testing::tiny_config();
    c.steps = 2;
    w.config = w.root / "tiny.ini";
    std::ofstream(w.config) << train::to_ini(c);
    const Result r = cli_run({"train", "--config", w.config.string(), "--paired",
                              w.corpus.paired_manifest.string(), "--untranscribed",
                              w.corpus.untranscribed_manifest.string(), "--out",
                              (w.root / "run").string()});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    w.checkpoint = field(r.out, "checkpoint");
    const Result u = cli_run({"train", "--config", w.config.string(), "--steps", "0", "--paired",
                              w.corpus.paired_manifest.string(), "--untranscribed",
                              w.corpus.untranscribed_manifest.string(), "--out",
                              (w.root / "run0").string()});
    REQUIRE_MESSAGE(u.code == 0, u.err);
    w.untrained = field(u.out, "checkpoint");
    return w;
  }();
  return ws;
}

std::string first_eval_wav(const Workspace& w) {
  return data::load_manifest(w.corpus.eval_manifest).entries.at(0).audio_path.string();
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(cli_run({}).code == cli::kUsage);
  CHECK(cli_run({"frobnicate"}).code == cli::kUsage);
  CHECK(cli_run({"synthesize", "--text", "ma"}).code == cli::kUsage);
  CHECK(cli_run({"--help"}).code == 0);
}

TEST_CASE("train: missing config exits 2 with usage") {
  const auto& w = workspace();
  for (const std::string& cfg : std::vector<std::string>{"", (w.root / "nope.ini").string()}) {
    std::vector<std::string> args = {"train", "--paired", w.corpus.paired_manifest.string(),
                                     "--untranscribed", w.corpus.untranscribed_manifest.string(),
                                     "--out", (w.root / "never").string()};
    if (!cfg.empty()) args.insert(args.end(), {"--config", cfg});
    const Result r = cli_run(args);
    CHECK(r.code == cli::kUsage);
    CHECK(r.err.find("Usage") != std::string::npos);
  }
  CHECK_FALSE(fs::exists(w.root / "never"));
}

TEST_CASE("train: overlapping manifests exit 3") {
  const auto& w = workspace();
  const auto dir = scratch_dir("cli_overlap");
  // Untranscribed manifest that reuses a paired speaker id.
  const auto p = data::load_manifest(w.corpus.paired_manifest);
  const auto wav = fs::absolute(p.entries.at(0).audio_path).string();
  std::ofstream(dir / "u.jsonl") << nlohmann::json{{"audio", wav}, {"speaker", "P000"}, {"sr", 24000}}.dump()
                                 << "\n";
  const Result r = cli_run({"train", "--config", w.config.string(), "--paired",
                            w.corpus.paired_manifest.string(), "--untranscribed",
                            (dir / "u.jsonl").string(), "--out", (dir / "run").string()});
  CHECK(r.code == cli::kOverlap);
  CHECK(r.err.find("SpeakerOverlap") != std::string::npos);
}

TEST_CASE("train: config, input and checkpoint errors map to their codes") {
  const auto& w = workspace();
  const auto dir = scratch_dir("cli_codes");
  std::ofstream(dir / "bad.ini") << "[run]\nsteps = -3\n";
  auto train_with = [&](const fs::path& cfg, const std::string& paired) {
    return cli_run({"train", "--config", cfg.string(), "--paired", paired, "--untranscribed",
                    w.corpus.untranscribed_manifest.string(), "--out", (dir / "run").string()})
        .code;
  };
  CHECK(train_with(dir / "bad.ini", w.corpus.paired_manifest.string()) == cli::kBadConfig);
  CHECK(train_with(w.config, (dir / "missing.jsonl").string()) == cli::kBadInput);
  std::ofstream(dir / "junk.ckpt") << "not an archive";
  const Result r = cli_run({"synthesize", "--checkpoint", (dir / "junk.ckpt").string(), "--text",
                            "ma", "--reference", first_eval_wav(w), "--out",
                            (dir / "x.wav").string()});
  CHECK(r.code == cli::kBadCheckpoint);
  CHECK(cli::exit_code_for(ErrorKind::kIoError) == cli::kIo);
  CHECK(cli::exit_code_for(ErrorKind::kNonFiniteLoss) == cli::kNonFinite);
}

TEST_CASE("train: prints metrics and writes the run directory") {
  const auto& w = workspace();
  CHECK(fs::exists(w.checkpoint));
  CHECK(lines_of(read_file(w.root / "run" / "metrics.csv")).size() == 3);
  CHECK(fs::exists(w.untrained));
}

TEST_CASE("synthesize: 24 kHz output, seeded, length follows durations") {
  const auto& w = workspace();
  const auto dir = scratch_dir("cli_synth");
  auto synth = [&](const std::string& name, const std::string& seed) {
    return cli_run({"synthesize", "--checkpoint", w.checkpoint.string(), "--text", "masolie",
                    "--reference", first_eval_wav(w), "--out", (dir / name).string(), "--seed",
                    seed});
  };
  const Result a = synth("a.wav", "4");
  REQUIRE_MESSAGE(a.code == 0, a.err);
  REQUIRE(synth("b.wav", "4").code == 0);
  REQUIRE(synth("c.wav", "5").code == 0);
  CHECK(read_file(dir / "a.wav") == read_file(dir / "b.wav"));
  CHECK(read_file(dir / "a.wav") != read_file(dir / "c.wav"));

  const auto wav = data::read_wav(dir / "a.wav");
  CHECK(wav.sample_rate == 24000);
  std::smatch m;
  REQUIRE(std::regex_search(a.out, m, std::regex(R"((\d+) samples \((\d+) frames\))")));
  const long samples = std::stol(m[1]);
  const long frames = std::stol(m[2]);
  CHECK(frames >= 7);
  CHECK(static_cast<long>(wav.samples.size()) == samples);
  CHECK(samples == 256 * frames);
  CHECK(static_cast<double>(wav.samples.size()) / 24000.0 ==
        doctest::Approx(256.0 * frames / 24000.0));

  // Same numbers as the library call with the same seed.
  const auto lm = train::load_model(w.checkpoint);
  Rng rng(4);
  const auto ref = data::read_wav(first_eval_wav(w));
  const auto s = lm.model.synthesize(lm.alphabet.tokenize("masolie"), ref.samples, *lm.encoder, rng);
  long sum = 0;
  for (auto d : s.durations.frames) sum += d;
  CHECK(sum == frames);
}

TEST_CASE("synthesize: untrained model and empty text") {
  const auto& w = workspace();
  const auto dir = scratch_dir("cli_synth_err");
  const Result u = cli_run({"synthesize", "--checkpoint", w.untrained.string(), "--text", "ma",
                            "--reference", first_eval_wav(w), "--out", (dir / "u.wav").string()});
  CHECK(u.code == cli::kUntrained);
  const Result e = cli_run({"synthesize", "--checkpoint", w.checkpoint.string(), "--text", "",
                            "--reference", first_eval_wav(w), "--out", (dir / "e.wav").string()});
  CHECK(e.code == cli::kEmptyText);
  CHECK_FALSE(fs::exists(dir / "u.wav"));
  CHECK_FALSE(fs::exists(dir / "e.wav"));
}

TEST_CASE("evaluate: empty texts, row counts, summary keys") {
  const auto& w = workspace();
  const auto dir = scratch_dir("cli_eval");
  std::ofstream(dir / "none.txt") << "\n";
  const Result e = cli_run({"evaluate", "--checkpoint", w.checkpoint.string(), "--manifest",
                            w.corpus.eval_manifest.string(), "--texts", (dir / "none.txt").string(),
                            "--out", (dir / "empty").string()});
  CHECK_MESSAGE(e.code == 0, e.err);
  CHECK(lines_of(read_file(dir / "empty" / "secs_report.csv")).size() == 1);

  std::ofstream(dir / "two.txt") << "male\nsofa\n";
  const Result r = cli_run({"evaluate", "--checkpoint", w.checkpoint.string(), "--manifest",
                            w.corpus.eval_manifest.string(), "--texts", (dir / "two.txt").string(),
                            "--out", (dir / "two").string(), "--seed", "3"});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  const size_t refs = data::load_manifest(w.corpus.eval_manifest).entries.size();
  const auto rows = lines_of(read_file(dir / "two" / "secs_report.csv"));
  CHECK(rows.size() == 1 + 2 * refs);
  CHECK(rows[0] == eval::kReportHeader);
  const auto j = nlohmann::json::parse(read_file(dir / "two" / "secs_summary.json"));
  for (const char* k : {"secs_to_reference", "secs_to_support"}) {
    CHECK(j.at(k).contains("mean"));
    CHECK(j.at(k).contains("std"));
    CHECK(std::abs(j.at(k).at("mean").get<double>()) <= 1.0);
  }
  CHECK(r.err.find("SeenSpeaker") == std::string::npos);

  const Result seen = cli_run({"evaluate", "--checkpoint", w.checkpoint.string(), "--manifest",
                               w.corpus.untranscribed_manifest.string(), "--texts",
                               (dir / "two.txt").string(), "--out", (dir / "seen").string()});
  CHECK(seen.code == 0);
  CHECK(seen.err.find("SeenSpeaker") != std::string::npos);
}

TEST_CASE("inspect-episode: deterministic, disjoint, from the right sets") {
  const auto& w = workspace();
  std::set<std::string> paired, untranscribed;
  for (const auto& e : data::load_manifest(w.corpus.paired_manifest).entries) paired.insert(e.speaker_id);
  for (const auto& e : data::load_manifest(w.corpus.untranscribed_manifest).entries) {
    untranscribed.insert(e.speaker_id);
  }
  std::set<std::string> seen_queries;
  for (int seed = 0; seed < 20; ++seed) {
    const std::vector<std::string> args = {"inspect-episode", "--paired",
                                           w.corpus.paired_manifest.string(), "--untranscribed",
                                           w.corpus.untranscribed_manifest.string(), "--seed",
                                           std::to_string(seed)};
    const Result a = cli_run(args);
    const Result b = cli_run(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    const auto s = field(a.out, "support_speaker");
    const auto q = field(a.out, "query_speaker");
    CHECK(paired.count(s) == 1);
    CHECK(untranscribed.count(q) == 1);
    CHECK(s != q);
    CHECK_FALSE(field(a.out, "x_t").empty());
    seen_queries.insert(q);
  }
  CHECK(seen_queries.size() > 1);
}

TEST_CASE("make-synthetic-corpus through the CLI") {
  const auto dir = scratch_dir("cli_make");
  const Result r = cli_run({"make-synthetic-corpus", "--out", dir.string(), "--seed", "2",
                            "--paired-speakers", "2", "--untranscribed-speakers", "2",
                            "--eval-speakers", "1", "--utterances", "2", "--duration", "0.5"});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  CHECK(r.out.find("speaker separation") != std::string::npos);
  CHECK(fs::exists(dir / "paired.jsonl"));
  CHECK(cli_run({"make-synthetic-corpus", "--out", dir.string(), "--paired-speakers", "0"}).code ==
        cli::kBadConfig);
}

TEST_CASE("installed binary returns the documented exit codes") {
  const auto& w = workspace();
  auto status = [](const std::string& cmd) {
    const int s = std::system((cmd + " > /dev/null 2>&1").c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
  };
  const std::string bin = ASCL_CLI_PATH;
  CHECK(status(bin + " --help") == 0);
  CHECK(status(bin + " train --paired " + w.corpus.paired_manifest.string() + " --untranscribed " +
               w.corpus.untranscribed_manifest.string() + " --out /tmp/ascl_never") == 2);
  const auto dir = scratch_dir("cli_binary");
  const auto p = data::load_manifest(w.corpus.paired_manifest);
  std::ofstream(dir / "u.jsonl") << nlohmann::json{{"audio", fs::absolute(p.entries.at(0).audio_path).string()},
                                                   {"speaker", "P000"},
                                                   {"sr", 24000}}
                                        .dump()
                                 << "\n";
  CHECK(status(bin + " inspect-episode --paired " + w.corpus.paired_manifest.string() +
               " --untranscribed " + (dir / "u.jsonl").string()) == 3);
}
