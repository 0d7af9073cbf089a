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

#ifndef ASCL_RNG_H_
#define ASCL_RNG_H_

#include <cstdint>
#include <random>
#include <string>

namespace ascl {

// Seeded generator whose draws are reproducible across standard libraries.
// std::*_distribution is implementation-defined (and normal_distribution
// caches a spare value), so the derived draws are computed here directly
// from the raw mt19937_64 stream. The whole state round-trips via
// state()/set_state().
class Rng {
 public:
  explicit Rng(uint64_t seed = 0) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Unbiased integer in [0, n).
  uint64_t index(uint64_t n);

  // Standard normal via Box-Muller; consumes exactly two uniforms.
  double normal();

  std::string state() const;
  void set_state(const std::string& state);

 private:
  std::mt19937_64 engine_;
};

}  // namespace ascl

#endif  // ASCL_RNG_H_
