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


#include "ascl/cli/cli.h"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "ascl/data/audio.h"
#include "ascl/data/episode.h"
#include "ascl/data/manifest.h"
#include "ascl/data/tokenizer.h"
#include "ascl/eval/secs.h"
#include "ascl/synth/corpus.h"
#include "ascl/train/run.h"

namespace ascl::cli {

namespace fs = std::filesystem;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kSpeakerOverlap:
      return kOverlap;
    case ErrorKind::kMissingFile:
    case ErrorKind::kSchemaError:
    case ErrorKind::kEmptyManifest:
    case ErrorKind::kEmptyCorpus:
    case ErrorKind::kUnsupportedRate:
    case ErrorKind::kEmptyWaveform:
    case ErrorKind::kShapeMismatch:
    case ErrorKind::kTooShort:
    case ErrorKind::kTooFewFrames:
    case ErrorKind::kOddChannels:
    case ErrorKind::kSeenSpeaker:
      return kBadInput;
    case ErrorKind::kConfigError:
      return kBadConfig;
    case ErrorKind::kUntrainedModel:
      return kUntrained;
    case ErrorKind::kEmptyText:
      return kEmptyText;
    case ErrorKind::kNonFiniteLoss:
      return kNonFinite;
    case ErrorKind::kCheckpointError:
      return kBadCheckpoint;
    case ErrorKind::kIoError:
      return kIo;
  }
  return kFailure;
}

namespace {

fs::path default_alphabet(const fs::path& paired_manifest) {
  return paired_manifest.parent_path() / "alphabet.txt";
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kMissingFile, "cannot read " + path.string());
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") != std::string::npos) out.push_back(line);
  }
  return out;
}

std::string join_ids(const std::vector<int>& ids) {
  std::string s = "[";
  for (size_t i = 0; i < ids.size(); ++i) s += (i ? "," : "") + std::to_string(ids[i]);
  return s + "]";
}

struct Options {
  // make-synthetic-corpus
  synth::SyntheticCorpusSpec spec;
  std::string out;
  // train
  std::string config;
  std::string paired;
  std::string untranscribed;
  std::string alphabet;
  std::string resume;
  std::optional<uint64_t> seed;
  std::optional<int64_t> steps;
  // synthesize / evaluate
  std::string checkpoint;
  std::string text;
  std::string reference;
  std::optional<double> noise_scale;
  std::string manifest;
  std::string texts;
  std::string support_manifest;
};

int cmd_make_corpus(const Options& o, std::ostream& out) {
  const auto corpus = synth::make_synthetic_corpus(o.spec, o.out);
  out << "paired: " << corpus.paired_manifest.string() << "\n"
      << "untranscribed: " << corpus.untranscribed_manifest.string() << "\n";
  if (!corpus.eval_manifest.empty()) out << "eval: " << corpus.eval_manifest.string() << "\n";
  out << "alphabet: " << corpus.alphabet.string() << "\n"
      << "eval texts: " << corpus.eval_texts.string() << "\n";
  const auto sep = synth::measure_separation(data::load_manifest(corpus.paired_manifest),
                                             *speaker::default_speaker_encoder());
  out << std::fixed << std::setprecision(4) << "speaker separation: same " << sep.mean_same
      << " cross " << sep.mean_cross << "\n";
  return kOk;
}

int cmd_train(const Options& o, std::ostream& out, std::ostream& err, const CLI::App& sub) {
  if (o.config.empty() || !fs::exists(o.config)) {
    err << "error: config file " << (o.config.empty() ? "not given" : "not found: " + o.config)
        << "\n\n"
        << sub.help();
    return kUsage;
  }
  train::TrainConfig config = train::load_train_config(o.config);
  if (o.seed) config.seed = *o.seed;
  if (o.steps) config.steps = *o.steps;
  train::RunOptions opt;
  opt.out_dir = o.out;
  opt.alphabet = o.alphabet;
  if (!o.resume.empty()) opt.resume_from = fs::path(o.resume);
  opt.on_log = [&out](const train::StepRecord& r) {
    out << "step " << r.step << std::fixed << std::setprecision(4) << " d_loss " << r.d_loss
        << " g_ascl " << r.g_ascl << " recon " << r.recon << " kl " << r.kl << " duration "
        << r.duration << std::setprecision(1) << " wall_ms " << r.wall_ms << "\n"
        << std::defaultfloat;
    out.flush();
  };
  const fs::path last = train::run_training(config, o.paired, o.untranscribed, opt);
  out << "checkpoint: " << last.string() << "\n";
  return kOk;
}

int cmd_synthesize(const Options& o, std::ostream& out) {
  const train::LoadedModel m = train::load_model(o.checkpoint);
  const auto tokens = m.alphabet.tokenize(o.text);
  const auto wav = data::read_wav(o.reference);
  const auto ref = data::resample(wav.samples, wav.sample_rate);
  const auto encoder = m.encoder ? m.encoder : speaker::default_speaker_encoder();
  Rng rng(o.seed.value_or(0));
  const gen::Synthesis s = m.model.synthesize(tokens, ref, *encoder, rng, o.noise_scale);
  data::write_wav(o.out, s.wave, data::kSampleRate);
  int64_t frames = 0;
  for (int64_t d : s.durations.frames) frames += d;
  out << "wrote " << o.out << ": " << s.wave.size() << " samples (" << frames
      << " frames) at " << data::kSampleRate << " Hz\n";
  return kOk;
}

int cmd_evaluate(const Options& o, std::ostream& out, std::ostream& err) {
  const train::LoadedModel m = train::load_model(o.checkpoint);
  const auto texts = read_lines(o.texts);
  const data::AudioCorpus refs(data::load_manifest(o.manifest), nullptr);
  data::AudioCorpus support;
  if (!texts.empty()) {
    const fs::path pool = o.support_manifest.empty() ? fs::path(m.paired_manifest)
                                                     : fs::path(o.support_manifest);
    support = data::AudioCorpus(data::load_manifest(pool), &m.alphabet);
  }
  const auto encoder = speaker::default_speaker_encoder();
  const eval::SecsReport report =
      eval::evaluate_zero_shot(m, refs, texts, support, *encoder, o.seed.value_or(0));
  eval::write_report(report, o.out);
  for (const auto& s : report.seen_speakers) {
    err << "warning: SeenSpeaker: reference speaker " << s << " was used in training\n";
  }
  const auto r = report.reference_summary();
  const auto s = report.support_summary();
  out << "rows " << report.rows.size() << std::fixed << std::setprecision(4)
      << " secs_to_reference mean " << r.mean << " std " << r.std << " secs_to_support mean "
      << s.mean << " std " << s.std << "\n";
  return kOk;
}

int cmd_inspect(const Options& o, std::ostream& out) {
  const auto pm = data::load_manifest(o.paired, data::CorpusKind::kPaired);
  const auto um = data::load_manifest(o.untranscribed, data::CorpusKind::kUntranscribed);
  data::assert_disjoint_speakers(pm, um);
  const auto alphabet =
      data::Alphabet::load(o.alphabet.empty() ? default_alphabet(o.paired) : fs::path(o.alphabet));
  const data::AudioCorpus paired(pm, &alphabet);
  const data::AudioCorpus untranscribed(um, nullptr);
  Rng rng(o.seed.value_or(0));
  const data::EpisodeTuple ep = data::sample_episode(rng, paired, untranscribed);
  const auto seconds = [](const data::Waveform& w) {
    return static_cast<double>(w.size()) / data::kSampleRate;
  };
  out << std::fixed << std::setprecision(4) << "seed: " << o.seed.value_or(0) << "\n"
      << "support_speaker: " << ep.support_speaker() << "\n"
      << "support_audio: " << ep.support->audio_path.string() << "\n"
      << "support_duration_s: " << seconds(ep.y_t_s()) << "\n"
      << "text: " << pm.entries[ep.support_index].text.value_or("") << "\n"
      << "x_t: " << join_ids(ep.x_t) << "\n"
      << "query_speaker: " << ep.query_speaker() << "\n"
      << "query_audio: " << ep.query->audio_path.string() << "\n"
      << "query_duration_s: " << seconds(ep.y_u_q()) << "\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Adversarial speaker-consistency training for a miniature VITS", "ascl"};
  app.require_subcommand(1);
  Options o;

  auto* mk = app.add_subcommand("make-synthetic-corpus", "Write a deterministic synthetic corpus");
  mk->add_option("--out", o.out, "Output directory")->required();
  mk->add_option("--seed", o.spec.seed, "Corpus seed");
  mk->add_option("--paired-speakers", o.spec.n_paired_speakers, "Transcribed speakers (P###)");
  mk->add_option("--untranscribed-speakers", o.spec.n_untranscribed_speakers,
                 "Untranscribed speakers (U###)");
  mk->add_option("--eval-speakers", o.spec.n_eval_speakers, "Held-out speakers (E###)");
  mk->add_option("--utterances", o.spec.utterances_per_speaker, "Utterances per speaker");
  mk->add_option("--duration", o.spec.duration_s, "Approximate utterance length in seconds");
  mk->add_option("--eval-texts", o.spec.n_eval_texts, "Lines in eval_texts.txt");

  auto* tr = app.add_subcommand("train", "Run episodic adversarial training");
  tr->add_option("--config", o.config, "Training config (INI)");
  tr->add_option("--paired", o.paired, "Paired manifest (JSONL)")->required();
  tr->add_option("--untranscribed", o.untranscribed, "Untranscribed manifest (JSONL)")->required();
  tr->add_option("--out", o.out, "Run directory for checkpoints and metrics.csv")->required();
  tr->add_option("--alphabet", o.alphabet, "Alphabet file (default: beside --paired)");
  tr->add_option("--resume", o.resume, "Checkpoint to continue from");
  tr->add_option("--seed", o.seed, "Override [run] seed");
  tr->add_option("--steps", o.steps, "Override [run] steps");

  auto* sy = app.add_subcommand("synthesize", "Synthesize text in the voice of a reference WAV");
  sy->add_option("--checkpoint", o.checkpoint, "Trained checkpoint")->required();
  sy->add_option("--text", o.text, "Text to speak")->required();
  sy->add_option("--reference", o.reference, "Reference WAV of the target speaker")->required();
  sy->add_option("--out", o.out, "Output WAV (24 kHz, 16-bit mono)")->required();
  sy->add_option("--seed", o.seed, "Sampling seed");
  sy->add_option("--noise-scale", o.noise_scale, "Prior sampling temperature");

  auto* ev = app.add_subcommand("evaluate", "Zero-shot SECS report over texts x references");
  ev->add_option("--checkpoint", o.checkpoint, "Trained checkpoint")->required();
  ev->add_option("--manifest", o.manifest, "Reference manifest (unseen speakers)")->required();
  ev->add_option("--texts", o.texts, "Text file, one utterance per line")->required();
  ev->add_option("--out", o.out, "Report directory")->required();
  ev->add_option("--seed", o.seed, "Sampling seed");
  ev->add_option("--support-manifest", o.support_manifest,
                 "Support-control pool (default: the training paired manifest)");

  auto* in = app.add_subcommand("inspect-episode", "Print the episode a seed would draw");
  in->add_option("--paired", o.paired, "Paired manifest")->required();
  in->add_option("--untranscribed", o.untranscribed, "Untranscribed manifest")->required();
  in->add_option("--alphabet", o.alphabet, "Alphabet file (default: beside --paired)");
  in->add_option("--seed", o.seed, "Sampler seed");

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (mk->parsed()) return cmd_make_corpus(o, out);
    if (tr->parsed()) return cmd_train(o, out, err, *tr);
    if (sy->parsed()) return cmd_synthesize(o, out);
    if (ev->parsed()) return cmd_evaluate(o, out, err);
    if (in->parsed()) return cmd_inspect(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  err << app.help();
  return kUsage;
}

}  // namespace ascl::cli
