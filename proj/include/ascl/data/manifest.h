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

#ifndef ASCL_DATA_MANIFEST_H_
#define ASCL_DATA_MANIFEST_H_

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace ascl::data {

enum class CorpusKind { kPaired, kUntranscribed };

struct ManifestEntry {
  std::filesystem::path audio_path;  // resolved against the manifest directory
  std::string speaker_id;
  std::optional<std::string> text;
  int sample_rate = 0;
};

struct CorpusManifest {
  CorpusKind kind = CorpusKind::kPaired;
  std::vector<ManifestEntry> entries;

  std::set<std::string> speakers() const;
};

// JSON-lines manifest: one object per line with keys "audio", "speaker",
// "sr" and, for paired corpora only, "text". Relative audio paths resolve
// against the manifest's directory. Without an expected kind, the kind is
// inferred from the presence of "text" (mixing is a SchemaError).
CorpusManifest load_manifest(const std::filesystem::path& path,
                             std::optional<CorpusKind> expected = std::nullopt);

// Writes entries in the same format; audio paths are written relative to
// the manifest directory when they live below it.
void save_manifest(const std::filesystem::path& path, const CorpusManifest& manifest);

// Throws SpeakerOverlap naming every shared speaker id.
void assert_disjoint_speakers(const CorpusManifest& paired,
                              const CorpusManifest& untranscribed);

}  // namespace ascl::data

#endif  // ASCL_DATA_MANIFEST_H_
