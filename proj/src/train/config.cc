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


#include "ascl/train/config.h"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "ascl/error.h"

namespace ascl::train {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad(const std::string& where, const std::string& msg) {
  throw Error(ErrorKind::kConfigError, where + ": " + msg);
}

template <typename T>
T parse_number(const std::string& where, const std::string& v) {
  T out{};
  const char* first = v.data();
  const char* last = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last) bad(where, "cannot parse '" + v + "'");
  return out;
}

bool parse_bool(const std::string& where, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad(where, "expected true/false, got '" + v + "'");
}

std::vector<int> parse_list(const std::string& where, const std::string& v) {
  std::vector<int> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number<int>(where, trim(item)));
  return out;
}

std::string join(const std::vector<int>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

using Setter = std::function<void(TrainConfig&, const std::string& where, const std::string&)>;

template <typename T, typename Field>
Setter num(Field field) {
  return [field](TrainConfig& c, const std::string& w, const std::string& v) {
    field(c) = parse_number<T>(w, v);
  };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"run.steps", num<int64_t>([](TrainConfig& c) -> int64_t& { return c.steps; })},
      {"run.batch_size", num<int>([](TrainConfig& c) -> int& { return c.batch_size; })},
      {"run.seed", num<uint64_t>([](TrainConfig& c) -> uint64_t& { return c.seed; })},
      {"run.checkpoint_every",
       num<int64_t>([](TrainConfig& c) -> int64_t& { return c.checkpoint_every; })},
      {"run.log_every", num<int64_t>([](TrainConfig& c) -> int64_t& { return c.log_every; })},
      {"run.log_wall_time",
       [](TrainConfig& c, const std::string& w, const std::string& v) {
         c.log_wall_time = parse_bool(w, v);
       }},
      {"optim.lr_g", num<double>([](TrainConfig& c) -> double& { return c.lr_g; })},
      {"optim.lr_d", num<double>([](TrainConfig& c) -> double& { return c.lr_d; })},
      {"optim.beta1", num<double>([](TrainConfig& c) -> double& { return c.beta1; })},
      {"optim.beta2", num<double>([](TrainConfig& c) -> double& { return c.beta2; })},
      {"optim.eps", num<double>([](TrainConfig& c) -> double& { return c.eps; })},
      {"optim.lr_decay", num<double>([](TrainConfig& c) -> double& { return c.lr_decay; })},
      {"loss.alpha", num<double>([](TrainConfig& c) -> double& { return c.alpha; })},
      {"loss.recon", num<double>([](TrainConfig& c) -> double& { return c.weights.recon; })},
      {"loss.kl", num<double>([](TrainConfig& c) -> double& { return c.weights.kl; })},
      {"loss.duration",
       num<double>([](TrainConfig& c) -> double& { return c.weights.duration; })},
      {"loss.ascl", num<double>([](TrainConfig& c) -> double& { return c.weights.ascl; })},
      {"model.latent_channels",
       num<int>([](TrainConfig& c) -> int& { return c.model.latent_channels; })},
      {"model.hidden_channels",
       num<int>([](TrainConfig& c) -> int& { return c.model.hidden_channels; })},
      {"model.text_layers", num<int>([](TrainConfig& c) -> int& { return c.model.text_layers; })},
      {"model.flow_layers", num<int>([](TrainConfig& c) -> int& { return c.model.flow_layers; })},
      {"model.flow_hidden", num<int>([](TrainConfig& c) -> int& { return c.model.flow_hidden; })},
      {"model.flow_kernel", num<int>([](TrainConfig& c) -> int& { return c.model.flow_kernel; })},
      {"model.decoder_channels",
       num<int>([](TrainConfig& c) -> int& { return c.model.decoder_channels; })},
      {"model.decoder_stages",
       num<int>([](TrainConfig& c) -> int& { return c.model.decoder_stages; })},
      {"model.duration_hidden",
       num<int>([](TrainConfig& c) -> int& { return c.model.duration_hidden; })},
      {"model.segment_frames",
       num<int>([](TrainConfig& c) -> int& { return c.model.segment_frames; })},
      {"model.noise_scale",
       num<double>([](TrainConfig& c) -> double& { return c.model.noise_scale; })},
      {"model.max_token_frames",
       num<int>([](TrainConfig& c) -> int& { return c.model.max_token_frames; })},
      {"discriminator.channels",
       [](TrainConfig& c, const std::string& w, const std::string& v) {
         c.discriminator.channels = parse_list(w, v);
       }},
      {"discriminator.groups",
       [](TrainConfig& c, const std::string& w, const std::string& v) {
         c.discriminator.groups = parse_list(w, v);
       }},
  };
  return table;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

TrainConfig parse_train_config(const std::string& text) {
  TrainConfig c;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(lineno);
    if (line.front() == '[') {
      if (line.back() != ']') bad(where, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      static const std::set<std::string> kSections = {"run", "optim", "loss", "model",
                                                      "discriminator"};
      if (!kSections.contains(section)) bad(where, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) bad(where, "expected key = value");
    const std::string key = section + "." + trim(line.substr(0, eq));
    const auto it = setters().find(key);
    if (it == setters().end()) bad(where, "unknown key '" + key + "'");
    it->second(c, where + " (" + key + ")", trim(line.substr(eq + 1)));
  }
  validate(c);
  return c;
}

TrainConfig load_train_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kMissingFile, "config not found: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_train_config(ss.str());
}

std::string to_ini(const TrainConfig& c) {
  std::ostringstream os;
  os << "[run]\n"
     << "steps = " << c.steps << "\n"
     << "batch_size = " << c.batch_size << "\n"
     << "seed = " << c.seed << "\n"
     << "checkpoint_every = " << c.checkpoint_every << "\n"
     << "log_every = " << c.log_every << "\n"
     << "log_wall_time = " << (c.log_wall_time ? "true" : "false") << "\n\n"
     << "[optim]\n"
     << "lr_g = " << fmt(c.lr_g) << "\n"
     << "lr_d = " << fmt(c.lr_d) << "\n"
     << "beta1 = " << fmt(c.beta1) << "\n"
     << "beta2 = " << fmt(c.beta2) << "\n"
     << "eps = " << fmt(c.eps) << "\n"
     << "lr_decay = " << fmt(c.lr_decay) << "\n\n"
     << "[loss]\n"
     << "alpha = " << fmt(c.alpha) << "\n"
     << "recon = " << fmt(c.weights.recon) << "\n"
     << "kl = " << fmt(c.weights.kl) << "\n"
     << "duration = " << fmt(c.weights.duration) << "\n"
     << "ascl = " << fmt(c.weights.ascl) << "\n\n"
     << "[model]\n"
     << "latent_channels = " << c.model.latent_channels << "\n"
     << "hidden_channels = " << c.model.hidden_channels << "\n"
     << "text_layers = " << c.model.text_layers << "\n"
     << "flow_layers = " << c.model.flow_layers << "\n"
     << "flow_hidden = " << c.model.flow_hidden << "\n"
     << "flow_kernel = " << c.model.flow_kernel << "\n"
     << "decoder_channels = " << c.model.decoder_channels << "\n"
     << "decoder_stages = " << c.model.decoder_stages << "\n"
     << "duration_hidden = " << c.model.duration_hidden << "\n"
     << "segment_frames = " << c.model.segment_frames << "\n"
     << "noise_scale = " << fmt(c.model.noise_scale) << "\n"
     << "max_token_frames = " << c.model.max_token_frames << "\n\n"
     << "[discriminator]\n"
     << "channels = " << join(c.discriminator.channels) << "\n"
     << "groups = " << join(c.discriminator.groups) << "\n";
  return os.str();
}

void validate(const TrainConfig& c) {
  auto fail = [](const std::string& m) { throw Error(ErrorKind::kConfigError, m); };
  if (c.steps < 0) fail("steps must be >= 0");
  if (c.batch_size <= 0) fail("batch_size must be positive");
  if (c.checkpoint_every <= 0) fail("checkpoint_every must be positive");
  if (c.log_every <= 0) fail("log_every must be positive");
  if (!(c.lr_g > 0) || !(c.lr_d > 0)) fail("learning rates must be positive");
  if (!(c.beta1 >= 0 && c.beta1 < 1) || !(c.beta2 >= 0 && c.beta2 < 1)) {
    fail("betas must lie in [0, 1)");
  }
  if (!(c.eps > 0)) fail("eps must be positive");
  if (!(c.lr_decay > 0 && c.lr_decay <= 1)) fail("lr_decay must lie in (0, 1]");
  if (!(c.alpha > 0 && c.alpha <= 1)) fail("alpha must lie in (0, 1]");
  const LossWeights& w = c.weights;
  if (!(w.recon >= 0) || !(w.kl >= 0) || !(w.duration >= 0) || !(w.ascl >= 0)) {
    fail("loss weights must be non-negative");
  }
  gen::ModelConfig m = c.model;
  if (m.vocab_size == 0) m.vocab_size = 2;  // filled from the alphabet later
  gen::validate(m);
  consistency::validate(c.discriminator);
  if (static_cast<int64_t>(c.model.segment_frames) * 256 < consistency::kMinInputLength) {
    fail("segment too short for the discriminator");
  }
}

}  // namespace ascl::train
