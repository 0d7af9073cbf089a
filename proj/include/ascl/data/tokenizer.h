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

#ifndef ASCL_DATA_TOKENIZER_H_
#define ASCL_DATA_TOKENIZER_H_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace ascl::data {

// Character-level alphabet. Symbol i (1-based line number in the alphabet
// file) has token id i; id 0 is reserved for unknown characters.
class Alphabet {
 public:
  static constexpr int kUnk = 0;

  Alphabet() = default;
  explicit Alphabet(const std::vector<std::string>& symbols);

  // One symbol (a single UTF-8 code point) per line.
  static Alphabet load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  std::vector<int> tokenize(std::string_view text) const;
  // Inverse over known ids; kUnk decodes to U+FFFD.
  std::string decode(const std::vector<int>& ids) const;

  int vocab_size() const { return static_cast<int>(symbols_.size()) + 1; }
  const std::vector<std::string>& symbols() const { return symbols_; }

 private:
  std::vector<std::string> symbols_;
  std::map<std::string, int> ids_;
};

// Splits UTF-8 into code points (each returned as its byte sequence).
// Malformed bytes come back as single-byte units.
std::vector<std::string> utf8_code_points(std::string_view text);

}  // namespace ascl::data

#endif  // ASCL_DATA_TOKENIZER_H_
