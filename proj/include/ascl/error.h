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

#ifndef ASCL_ERROR_H_
#define ASCL_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace ascl {

// Every failure the library reports is an ascl::Error tagged with one of
// these kinds. The CLI maps kinds onto exit codes.
enum class ErrorKind {
  kMissingFile,
  kSchemaError,
  kEmptyManifest,
  kSpeakerOverlap,
  kEmptyCorpus,
  kUnsupportedRate,
  kEmptyWaveform,
  kShapeMismatch,
  kEmptyText,
  kTooShort,
  kOddChannels,
  kTooFewFrames,
  kUntrainedModel,
  kNonFiniteLoss,
  kSeenSpeaker,
  kIoError,
  kConfigError,
  kCheckpointError,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ascl

#endif  // ASCL_ERROR_H_
