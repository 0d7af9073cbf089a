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

#include "ascl/data/manifest.h"

#include <algorithm>
#include <fstream>
#include <json.hpp>

#include "ascl/error.h"

namespace ascl::data {

namespace fs = std::filesystem;
using nlohmann::json;

std::set<std::string> CorpusManifest::speakers() const {
  std::set<std::string> out;
  for (const auto& e : entries) out.insert(e.speaker_id);
  return out;
}

CorpusManifest load_manifest(const fs::path& path, std::optional<CorpusKind> expected) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kMissingFile, "manifest " + path.string());
  const fs::path base = path.parent_path();

  CorpusManifest manifest;
  std::optional<bool> has_text;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); })) {
      continue;
    }
    const std::string where = path.string() + ":" + std::to_string(line_no);
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error(ErrorKind::kSchemaError, where + ": " + e.what());
    }
    if (!obj.is_object()) throw Error(ErrorKind::kSchemaError, where + ": not an object");
    for (const char* key : {"audio", "speaker", "sr"}) {
      if (!obj.contains(key)) {
        throw Error(ErrorKind::kSchemaError, where + ": missing field '" + key + "'");
      }
    }
    if (!obj["audio"].is_string() || !obj["speaker"].is_string() ||
        !obj["sr"].is_number_integer()) {
      throw Error(ErrorKind::kSchemaError, where + ": wrong field type");
    }
    ManifestEntry entry;
    entry.audio_path = obj["audio"].get<std::string>();
    if (entry.audio_path.is_relative()) entry.audio_path = base / entry.audio_path;
    entry.speaker_id = obj["speaker"].get<std::string>();
    entry.sample_rate = obj["sr"].get<int>();
    if (entry.speaker_id.empty()) {
      throw Error(ErrorKind::kSchemaError, where + ": empty speaker id");
    }
    const bool text_here = obj.contains("text");
    if (text_here) {
      if (!obj["text"].is_string() || obj["text"].get<std::string>().empty()) {
        throw Error(ErrorKind::kSchemaError, where + ": text must be a non-empty string");
      }
      entry.text = obj["text"].get<std::string>();
    }
    if (expected == CorpusKind::kUntranscribed && text_here) {
      throw Error(ErrorKind::kSchemaError, where + ": text in an untranscribed manifest");
    }
    if (expected == CorpusKind::kPaired && !text_here) {
      throw Error(ErrorKind::kSchemaError, where + ": paired entry without text");
    }
    if (has_text && *has_text != text_here) {
      throw Error(ErrorKind::kSchemaError, where + ": manifest mixes paired and untranscribed entries");
    }
    has_text = text_here;
    if (!fs::exists(entry.audio_path)) {
      throw Error(ErrorKind::kMissingFile, where + ": " + entry.audio_path.string());
    }
    manifest.entries.push_back(std::move(entry));
  }
  if (manifest.entries.empty()) throw Error(ErrorKind::kEmptyManifest, path.string());
  manifest.kind = expected.value_or(*has_text ? CorpusKind::kPaired : CorpusKind::kUntranscribed);
  return manifest;
}

void save_manifest(const fs::path& path, const CorpusManifest& manifest) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kIoError, "cannot write " + path.string());
  const fs::path base = path.parent_path();
  for (const auto& e : manifest.entries) {
    json obj;
    fs::path audio = e.audio_path;
    if (!base.empty()) {
      const fs::path rel = audio.lexically_relative(base);
      if (!rel.empty() && *rel.begin() != "..") audio = rel;
    }
    obj["audio"] = audio.generic_string();
    obj["speaker"] = e.speaker_id;
    if (e.text) obj["text"] = *e.text;
    obj["sr"] = e.sample_rate;
    out << obj.dump() << '\n';
  }
  if (!out) throw Error(ErrorKind::kIoError, "write failed: " + path.string());
}

void assert_disjoint_speakers(const CorpusManifest& paired,
                              const CorpusManifest& untranscribed) {
  const auto a = paired.speakers();
  const auto b = untranscribed.speakers();
  std::vector<std::string> shared;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(shared));
  if (!shared.empty()) {
    std::string list;
    for (const auto& s : shared) list += (list.empty() ? "" : ", ") + s;
    throw Error(ErrorKind::kSpeakerOverlap, "speakers in both corpora: {" + list + "}");
  }
}

}  // namespace ascl::data
