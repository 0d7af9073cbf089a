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


#include "ascl/train/trainer.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ascl/data/features.h"
#include "ascl/error.h"
#include "ascl/gen/losses.h"
#include "ascl/gen/mas.h"
#include "ascl/io/archive.h"
#include "ascl/nn/ops.h"
#include "json.hpp"

namespace ascl::train {

using nn::Tensor;

namespace {

constexpr const char* kCheckpointFormat = "ascl-checkpoint";
constexpr int kCheckpointVersion = 1;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

// samples [start, start + count) of wave, zero past the end.
Tensor wave_segment(const data::Waveform& wave, int64_t start, int64_t count) {
  std::vector<double> out(count, 0.0);
  for (int64_t i = 0; i < count; ++i) {
    const int64_t j = start + i;
    if (j >= 0 && j < static_cast<int64_t>(wave.size())) out[i] = wave[j];
  }
  return Tensor({count}, std::move(out));
}

io::ArchiveTensor to_archive(const Tensor& t) { return {t.shape(), t.values()}; }

io::ArchiveTensor to_archive(const nn::Shape& shape, const std::vector<double>& v) {
  return {shape, v};
}

void copy_into(Tensor& dst, const io::ArchiveTensor& src, const std::string& name) {
  if (src.shape != dst.shape()) {
    throw Error(ErrorKind::kCheckpointError, name + ": shape " + nn::shape_str(src.shape) +
                                                 " differs from model " +
                                                 nn::shape_str(dst.shape()));
  }
  std::copy(src.values.begin(), src.values.end(), dst.mutable_data().begin());
}

const io::ArchiveTensor& find(const io::Archive& ar, const std::string& name) {
  const auto it = ar.tensors.find(name);
  if (it == ar.tensors.end()) {
    throw Error(ErrorKind::kCheckpointError, "checkpoint lacks tensor " + name);
  }
  return it->second;
}

void restore_params(const io::Archive& ar, const std::string& prefix, nn::NamedTensors params) {
  for (auto& p : params) copy_into(p.tensor, find(ar, prefix + p.name), prefix + p.name);
}

void store_optimizer(io::Archive& ar, const std::string& prefix, nn::Adam& opt) {
  const auto& params = opt.params();
  for (size_t i = 0; i < params.size(); ++i) {
    ar.tensors[prefix + ".m." + params[i].name] =
        to_archive(params[i].tensor.shape(), opt.first_moments()[i]);
    ar.tensors[prefix + ".v." + params[i].name] =
        to_archive(params[i].tensor.shape(), opt.second_moments()[i]);
  }
}

void restore_optimizer(const io::Archive& ar, const std::string& prefix, nn::Adam& opt) {
  const auto& params = opt.params();
  for (size_t i = 0; i < params.size(); ++i) {
    opt.first_moments()[i] = find(ar, prefix + ".m." + params[i].name).values;
    opt.second_moments()[i] = find(ar, prefix + ".v." + params[i].name).values;
    if (opt.first_moments()[i].size() != static_cast<size_t>(params[i].tensor.numel()) ||
        opt.second_moments()[i].size() != static_cast<size_t>(params[i].tensor.numel())) {
      throw Error(ErrorKind::kCheckpointError, "optimizer state size mismatch for " + params[i].name);
    }
  }
}

nlohmann::json parse_meta(const io::Archive& ar, const std::filesystem::path& path) {
  auto meta = nlohmann::json::parse(ar.metadata_json, nullptr, false);
  if (meta.is_discarded() || !meta.is_object() || meta.value("format", "") != kCheckpointFormat) {
    throw Error(ErrorKind::kCheckpointError, path.string() + " is not a model checkpoint");
  }
  if (meta.value("version", 0) != kCheckpointVersion) {
    throw Error(ErrorKind::kCheckpointError, path.string() + ": unsupported checkpoint version");
  }
  return meta;
}

gen::ModelConfig model_config_for(const TrainConfig& config, const data::Alphabet& alphabet) {
  gen::ModelConfig m = config.model;
  m.vocab_size = alphabet.vocab_size();
  return m;
}

}  // namespace

std::string format_record(const StepRecord& r) {
  return std::to_string(r.step) + "," + fmt(r.d_loss) + "," + fmt(r.g_ascl) + "," +
         fmt(r.recon) + "," + fmt(r.kl) + "," + fmt(r.duration) + "," + fmt(r.wall_ms);
}

Trainer::Trainer(const TrainConfig& config, std::shared_ptr<const data::AudioCorpus> paired,
                 std::shared_ptr<const data::AudioCorpus> untranscribed, data::Alphabet alphabet,
                 std::shared_ptr<const speaker::SpeakerEncoder> encoder)
    : config_(config),
      paired_(std::move(paired)),
      untranscribed_(std::move(untranscribed)),
      alphabet_(std::move(alphabet)),
      encoder_(std::move(encoder)),
      rng_(config.seed) {
  validate(config_);
  if (!paired_ || paired_->empty()) throw Error(ErrorKind::kEmptyCorpus, "paired corpus is empty");
  if (!untranscribed_ || untranscribed_->empty()) {
    throw Error(ErrorKind::kEmptyCorpus, "untranscribed corpus is empty");
  }
  if (paired_->kind() != data::CorpusKind::kPaired ||
      untranscribed_->kind() != data::CorpusKind::kUntranscribed) {
    throw Error(ErrorKind::kSchemaError, "expected a paired and an untranscribed corpus");
  }
  data::assert_disjoint_speakers(paired_->manifest(), untranscribed_->manifest());
  if (!encoder_) throw Error(ErrorKind::kConfigError, "no speaker encoder");

  config_.model = model_config_for(config_, alphabet_);
  model_ = gen::VitsModel(config_.model, rng_);
  disc_ = consistency::SpeakerConsistencyDiscriminator(config_.discriminator, rng_);
  g_opt_ = std::make_unique<nn::Adam>(
      model_.parameters(), nn::AdamOptions{config_.lr_g, config_.beta1, config_.beta2, config_.eps});
  d_opt_ = std::make_unique<nn::Adam>(
      disc_.parameters(), nn::AdamOptions{config_.lr_d, config_.beta1, config_.beta2, config_.eps});
  steps_per_epoch_ = (static_cast<int64_t>(paired_->size()) + config_.batch_size - 1) /
                     config_.batch_size;
}

double Trainer::lr_g_at(int64_t step) const {
  return config_.lr_g * std::pow(config_.lr_decay, static_cast<double>(step / steps_per_epoch_));
}

double Trainer::lr_d_at(int64_t step) const {
  return config_.lr_d * std::pow(config_.lr_decay, static_cast<double>(step / steps_per_epoch_));
}

const UtteranceFeatures& Trainer::features(const data::Utterance& utt) {
  auto it = cache_.find(&utt);
  if (it != cache_.end()) return it->second;
  UtteranceFeatures f;
  f.linear = data::linear_spectrogram(utt.wave);
  f.mel = data::mel_spectrogram(f.linear);
  f.raw = encoder_->embed(f.mel);
  return cache_.emplace(&utt, std::move(f)).first->second;
}

std::vector<data::EpisodeTuple> Trainer::sample_batch() {
  std::vector<data::EpisodeTuple> batch;
  batch.reserve(config_.batch_size);
  for (int b = 0; b < config_.batch_size; ++b) {
    batch.push_back(data::sample_episode(rng_, *paired_, *untranscribed_));
  }
  return batch;
}

EpisodeLosses Trainer::episode_losses(const data::EpisodeTuple& ep, bool score_fakes) {
  const UtteranceFeatures& fs = features(*ep.support);
  const UtteranceFeatures& fq = features(*ep.query);
  EpisodeLosses out;
  out.g_s = model_.head(fs.raw);
  out.g_q = model_.head(fq.raw);
  const speaker::ReferenceEmbedding g_d = model_.reference(fs.mel);

  // ELBO path.
  const gen::TextEncoding enc = model_.text(ep.x_t);
  const gen::PosteriorSample post = model_.posterior(fs.linear, rng_);
  const gen::FlowOutput f = model_.flow.forward(post.z_v, out.g_s);
  const int64_t num_tokens = static_cast<int64_t>(ep.x_t.size());
  const gen::Alignment alignment = gen::mas_align(enc.prior, f.z);
  const gen::PriorStats expanded = gen::expand_prior(enc.prior, alignment);
  out.kl = gen::kl_loss(post, expanded, f);
  out.duration = gen::duration_loss(model_.duration.log_durations(enc.hidden, out.g_s, g_d),
                                    gen::durations_of(alignment, num_tokens));

  // Autoencoding reconstruction on a random window.
  const int64_t frames = post.z_v.length();
  const int64_t seg = std::min<int64_t>(config_.model.segment_frames, frames);
  const int64_t start = static_cast<int64_t>(rng_.index(frames - seg + 1));
  const int64_t hop = data::kHopSize;
  out.real_s = wave_segment(ep.y_t_s(), start * hop, seg * hop);
  Tensor mel_target;
  {
    nn::NoGradGuard no_grad;
    mel_target = data::log_mel_tensor(out.real_s);
  }
  out.recon = gen::recon_loss(model_.decoder(nn::slice_cols(post.z_v.frames, start, seg)),
                              mel_target);

  // Speaker swap from the gradient-stopped flow latent.
  const gen::LatentSequence z_f = consistency::stop_gradient(f.z);
  out.y_hat_s = model_.decoder(
      nn::slice_cols(model_.flow.inverse(z_f, out.g_s).frames, start, seg));
  out.y_hat_q = model_.decoder(
      nn::slice_cols(model_.flow.inverse(z_f, out.g_q).frames, start, seg));

  const int64_t q_len = static_cast<int64_t>(ep.y_u_q().size());
  const int64_t q_start = static_cast<int64_t>(rng_.index(std::max<int64_t>(1, q_len - seg * hop + 1)));
  out.real_q = wave_segment(ep.y_u_q(), q_start, seg * hop);

  if (!score_fakes) return out;
  out.fake_s = disc_(out.y_hat_s, out.g_s.detached());
  out.fake_q = disc_(out.y_hat_q, out.g_q.detached());
  out.ascl = consistency::ascl_generator_loss(out.fake_q, out.fake_s, config_.alpha);
  return out;
}

void Trainer::check_finite(const StepRecord& r,
                           const std::vector<data::EpisodeTuple>& batch) const {
  const double values[] = {r.d_loss, r.g_ascl, r.recon, r.kl, r.duration};
  bool ok = true;
  for (double v : values) ok = ok && std::isfinite(v);
  if (ok) return;
  std::string where;
  if (diagnostic_dir_) {
    nlohmann::json dump;
    dump["step"] = r.step;
    dump["d_loss"] = std::isfinite(r.d_loss) ? nlohmann::json(r.d_loss) : nlohmann::json(nullptr);
    dump["g_ascl"] = std::isfinite(r.g_ascl) ? nlohmann::json(r.g_ascl) : nlohmann::json(nullptr);
    dump["recon"] = std::isfinite(r.recon) ? nlohmann::json(r.recon) : nlohmann::json(nullptr);
    dump["kl"] = std::isfinite(r.kl) ? nlohmann::json(r.kl) : nlohmann::json(nullptr);
    dump["duration"] =
        std::isfinite(r.duration) ? nlohmann::json(r.duration) : nlohmann::json(nullptr);
    dump["generator_sq_norm"] = nn::squared_norm(model_.parameters());
    dump["discriminator_sq_norm"] = nn::squared_norm(disc_.parameters());
    for (const auto& ep : batch) {
      dump["episodes"].push_back({{"support", ep.support->audio_path.string()},
                                  {"query", ep.query->audio_path.string()}});
    }
    std::filesystem::create_directories(*diagnostic_dir_);
    const auto path = *diagnostic_dir_ / ("nonfinite_step_" + std::to_string(r.step) + ".json");
    std::ofstream(path) << dump.dump(2) << "\n";
    where = " (diagnostics in " + path.string() + ")";
  }
  throw Error(ErrorKind::kNonFiniteLoss, "step " + std::to_string(r.step) + ": " +
                                             format_record(r) + where);
}

StepRecord Trainer::step() {
  const auto batch = sample_batch();
  return train_step(batch);
}

StepRecord Trainer::train_step(const std::vector<data::EpisodeTuple>& batch) {
  if (batch.empty()) throw Error(ErrorKind::kEmptyCorpus, "empty batch");
  const auto t0 = std::chrono::steady_clock::now();
  StepRecord rec;
  rec.step = step_ + 1;

  std::vector<EpisodeLosses> losses;
  losses.reserve(batch.size());
  for (const auto& ep : batch) losses.push_back(episode_losses(ep, false));

  rec.d_loss = update_discriminator(losses);
  if (!std::isfinite(rec.d_loss)) check_finite(rec, batch);
  const bool finite = update_generator(losses, rec);
  check_finite(rec, batch);
  if (!finite) {
    throw Error(ErrorKind::kNonFiniteLoss, "step " + std::to_string(rec.step) +
                                               ": weighted generator loss overflowed");
  }

  ++step_;
  model_.trained_steps = step_;
  if (config_.log_wall_time) {
    rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                      .count();
  }
  return rec;
}

double Trainer::update_discriminator(const std::vector<EpisodeLosses>& losses) {
  const double inv_b = 1.0 / static_cast<double>(losses.size());
  d_opt_->zero_grad();
  Tensor total = Tensor::scalar(0.0);
  for (const auto& l : losses) {
    Tensor d = consistency::ascl_discriminator_loss(
        disc_(l.real_q, l.g_q.detached()), disc_(l.real_s, l.g_s.detached()),
        disc_(l.y_hat_q.detach(), l.g_q.detached()), disc_(l.y_hat_s.detach(), l.g_s.detached()),
        config_.alpha);
    total = nn::add(total, nn::scale(d, inv_b));
  }
  const double value = total.item();
  if (!std::isfinite(value)) return value;
  total.backward();
  d_opt_->set_lr(lr_d_at(step_));
  d_opt_->step();
  d_opt_->zero_grad();
  return value;
}

bool Trainer::update_generator(const std::vector<EpisodeLosses>& losses, StepRecord& rec) {
  const double inv_b = 1.0 / static_cast<double>(losses.size());
  const LossWeights& w = config_.weights;
  g_opt_->zero_grad();
  Tensor total = Tensor::scalar(0.0);
  rec.g_ascl = rec.recon = rec.kl = rec.duration = 0.0;
  for (const auto& l : losses) {
    // Scored by the discriminator as it stands after its own update.
    Tensor adv = consistency::ascl_generator_loss(disc_(l.y_hat_q, l.g_q.detached()),
                                                  disc_(l.y_hat_s, l.g_s.detached()),
                                                  config_.alpha);
    Tensor t = nn::add(nn::add(nn::scale(l.recon, w.recon), nn::scale(l.kl, w.kl)),
                       nn::scale(l.duration, w.duration));
    if (w.ascl != 0.0) t = nn::add(t, nn::scale(adv, w.ascl));
    total = nn::add(total, nn::scale(t, inv_b));
    rec.g_ascl += adv.item() * inv_b;
    rec.recon += l.recon.item() * inv_b;
    rec.kl += l.kl.item() * inv_b;
    rec.duration += l.duration.item() * inv_b;
  }
  if (!std::isfinite(total.item())) return false;
  total.backward();
  g_opt_->set_lr(lr_g_at(step_));
  g_opt_->step();
  g_opt_->zero_grad();
  d_opt_->zero_grad();
  return true;
}

void Trainer::save_checkpoint(const std::filesystem::path& path) const {
  io::Archive ar;
  for (const auto& p : model_.parameters()) ar.tensors["generator." + p.name] = to_archive(p.tensor);
  for (const auto& p : disc_.parameters()) ar.tensors[p.name] = to_archive(p.tensor);
  store_optimizer(ar, "optim.g", *g_opt_);
  store_optimizer(ar, "optim.d", *d_opt_);
  uint64_t enc_checksum = 0;
  if (auto standin = std::dynamic_pointer_cast<const speaker::StandInSpeakerEncoder>(encoder_)) {
    for (const auto& [name, t] : standin->parameters()) ar.tensors["speaker_encoder." + name] = t;
    enc_checksum = standin->checksum();
  }
  nlohmann::json meta;
  meta["format"] = kCheckpointFormat;
  meta["version"] = kCheckpointVersion;
  meta["step"] = step_;
  meta["config"] = to_ini(config_);
  meta["rng_state"] = rng_.state();
  meta["optim_g_steps"] = g_opt_->steps();
  meta["optim_d_steps"] = d_opt_->steps();
  meta["paired_speakers"] = paired_->manifest().speakers();
  meta["untranscribed_speakers"] = untranscribed_->manifest().speakers();
  meta["alphabet"] = alphabet_.symbols();
  meta["encoder_checksum"] = io::to_hex(enc_checksum);
  meta["paired_manifest"] = paired_manifest_;
  meta["untranscribed_manifest"] = untranscribed_manifest_;
  ar.metadata_json = meta.dump();
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  io::write_archive(path, ar);
}

void Trainer::load_checkpoint(const std::filesystem::path& path) {
  const io::Archive ar = io::read_archive(path);
  const nlohmann::json meta = parse_meta(ar, path);
  if (meta.at("alphabet").get<std::vector<std::string>>() != alphabet_.symbols()) {
    throw Error(ErrorKind::kCheckpointError, "checkpoint alphabet differs from the run's");
  }
  if (auto standin = std::dynamic_pointer_cast<const speaker::StandInSpeakerEncoder>(encoder_)) {
    if (meta.value("encoder_checksum", "") != io::to_hex(standin->checksum())) {
      throw Error(ErrorKind::kCheckpointError, "checkpoint was trained with another speaker encoder");
    }
  }
  restore_params(ar, "generator.", model_.parameters());
  restore_params(ar, "", disc_.parameters());
  restore_optimizer(ar, "optim.g", *g_opt_);
  restore_optimizer(ar, "optim.d", *d_opt_);
  g_opt_->set_steps(meta.at("optim_g_steps").get<int64_t>());
  d_opt_->set_steps(meta.at("optim_d_steps").get<int64_t>());
  rng_.set_state(meta.at("rng_state").get<std::string>());
  step_ = meta.at("step").get<int64_t>();
  model_.trained_steps = step_;
}

LoadedModel load_model(const std::filesystem::path& path) {
  const io::Archive ar = io::read_archive(path);
  const nlohmann::json meta = parse_meta(ar, path);
  LoadedModel out;
  try {
    out.config = parse_train_config(meta.at("config").get<std::string>());
    out.alphabet = data::Alphabet(meta.at("alphabet").get<std::vector<std::string>>());
    for (const auto& s : meta.at("paired_speakers")) out.training_speakers.insert(s.get<std::string>());
    for (const auto& s : meta.at("untranscribed_speakers")) {
      out.training_speakers.insert(s.get<std::string>());
    }
    out.paired_manifest = meta.value("paired_manifest", "");
    out.untranscribed_manifest = meta.value("untranscribed_manifest", "");
    out.step = meta.at("step").get<int64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kCheckpointError, path.string() + ": " + e.what());
  }
  out.config.model = model_config_for(out.config, out.alphabet);
  Rng init(0);
  out.model = gen::VitsModel(out.config.model, init);
  restore_params(ar, "generator.", out.model.parameters());
  out.model.trained_steps = out.step;

  std::map<std::string, io::ArchiveTensor> enc;
  const std::string prefix = "speaker_encoder.";
  for (const auto& [name, t] : ar.tensors) {
    if (name.rfind(prefix, 0) == 0) enc[name.substr(prefix.size())] = t;
  }
  if (!enc.empty()) {
    auto standin = std::make_shared<speaker::StandInSpeakerEncoder>(
        speaker::StandInSpeakerEncoder::from_tensors(std::move(enc)));
    out.encoder_checksum = standin->checksum();
    if (io::to_hex(out.encoder_checksum) != meta.value("encoder_checksum", "")) {
      throw Error(ErrorKind::kCheckpointError, "stored speaker encoder fails its checksum");
    }
    out.encoder = std::move(standin);
  }
  return out;
}

}  // namespace ascl::train
