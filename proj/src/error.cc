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

#include "ascl/error.h"

namespace ascl {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kMissingFile: return "MissingFile";
    case ErrorKind::kSchemaError: return "SchemaError";
    case ErrorKind::kEmptyManifest: return "EmptyManifest";
    case ErrorKind::kSpeakerOverlap: return "SpeakerOverlap";
    case ErrorKind::kEmptyCorpus: return "EmptyCorpus";
    case ErrorKind::kUnsupportedRate: return "UnsupportedRate";
    case ErrorKind::kEmptyWaveform: return "EmptyWaveform";
    case ErrorKind::kShapeMismatch: return "ShapeMismatch";
    case ErrorKind::kEmptyText: return "EmptyText";
    case ErrorKind::kTooShort: return "TooShort";
    case ErrorKind::kOddChannels: return "OddChannels";
    case ErrorKind::kTooFewFrames: return "TooFewFrames";
    case ErrorKind::kUntrainedModel: return "UntrainedModel";
    case ErrorKind::kNonFiniteLoss: return "NonFiniteLoss";
    case ErrorKind::kSeenSpeaker: return "SeenSpeaker";
    case ErrorKind::kIoError: return "IoError";
    case ErrorKind::kConfigError: return "ConfigError";
    case ErrorKind::kCheckpointError: return "CheckpointError";
  }
  return "Unknown";
}

}  // namespace ascl
