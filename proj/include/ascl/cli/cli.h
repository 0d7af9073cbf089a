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


#ifndef ASCL_CLI_CLI_H_
#define ASCL_CLI_CLI_H_

#include <ostream>
#include <string>
#include <vector>

#include "ascl/error.h"

namespace ascl::cli {

// Process exit codes of the ascl tool.
enum ExitCode : int {
  kOk = 0,
  kFailure = 1,        // anything not listed below
  kUsage = 2,          // bad flags or a missing config file
  kOverlap = 3,        // SpeakerOverlap
  kBadInput = 4,       // manifests, audio, alphabet, text shape problems
  kBadConfig = 5,      // ConfigError
  kUntrained = 6,      // UntrainedModel
  kEmptyText = 7,      // EmptyText
  kNonFinite = 8,      // NonFiniteLoss
  kBadCheckpoint = 9,  // CheckpointError
  kIo = 10,            // IoError
};

int exit_code_for(ErrorKind kind);

// Runs one command line (args[0] is the program name) and returns its exit
// code. Verbs: make-synthetic-corpus, train, synthesize, evaluate,
// inspect-episode.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ascl::cli

#endif  // ASCL_CLI_CLI_H_
