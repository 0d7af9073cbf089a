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


// Regenerates the frozen stand-in speaker encoder blob from its seed and
// prints the checksum to record in speaker_encoder.h.

#include <cstdint>
#include <iostream>

#include "CLI11.hpp"
#include "ascl/error.h"
#include "ascl/io/archive.h"
#include "ascl/speaker/speaker_encoder.h"

int main(int argc, char** argv) {
  CLI::App app{"Write the stand-in speaker encoder weights"};
  std::string out = "assets/speaker_encoder_v1.bin";
  uint64_t seed = ascl::speaker::StandInSpeakerEncoder::kSeed;
  app.add_option("--out", out, "Output blob path");
  app.add_option("--seed", seed, "Weight seed");
  CLI11_PARSE(app, argc, argv);
  try {
    const auto enc = ascl::speaker::StandInSpeakerEncoder::generate(seed);
    enc.save(out);
    std::cout << out << " checksum 0x" << ascl::io::to_hex(enc.checksum()) << "\n";
  } catch (const ascl::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
