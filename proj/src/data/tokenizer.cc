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

#include "ascl/data/tokenizer.h"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "ascl/error.h"

namespace ascl::data {

std::vector<std::string> utf8_code_points(std::string_view text) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    size_t len = 1;
    if (c >= 0xf0) len = 4;
    else if (c >= 0xe0) len = 3;
    else if (c >= 0xc0) len = 2;
    if (i + len > text.size()) len = 1;
    for (size_t k = 1; k < len; ++k) {
      if ((static_cast<unsigned char>(text[i + k]) & 0xc0) != 0x80) {
        len = 1;
        break;
      }
    }
    out.emplace_back(text.substr(i, len));
    i += len;
  }
  return out;
}

Alphabet::Alphabet(const std::vector<std::string>& symbols) : symbols_(symbols) {
  for (size_t i = 0; i < symbols_.size(); ++i) {
    if (utf8_code_points(symbols_[i]).size() != 1) {
      throw Error(ErrorKind::kSchemaError,
                  "alphabet symbol " + std::to_string(i + 1) + " is not a single character");
    }
    if (!ids_.emplace(symbols_[i], static_cast<int>(i) + 1).second) {
      throw Error(ErrorKind::kSchemaError, "duplicate alphabet symbol '" + symbols_[i] + "'");
    }
  }
}

Alphabet Alphabet::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kMissingFile, "alphabet " + path.string());
  std::vector<std::string> symbols;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    symbols.push_back(line);
  }
  // A trailing newline is not an empty symbol.
  while (!symbols.empty() && symbols.back().empty()) symbols.pop_back();
  return Alphabet(symbols);
}

void Alphabet::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIoError, "cannot write " + path.string());
  for (const auto& s : symbols_) out << s << '\n';
}

std::vector<int> Alphabet::tokenize(std::string_view text) const {
  const bool blank = std::all_of(text.begin(), text.end(),
                                 [](unsigned char c) { return std::isspace(c); });
  if (blank) throw Error(ErrorKind::kEmptyText, "tokenize: empty text");
  std::vector<int> ids;
  for (const auto& cp : utf8_code_points(text)) {
    const auto it = ids_.find(cp);
    ids.push_back(it == ids_.end() ? kUnk : it->second);
  }
  return ids;
}

std::string Alphabet::decode(const std::vector<int>& ids) const {
  std::string out;
  for (int id : ids) {
    if (id >= 1 && id <= static_cast<int>(symbols_.size())) out += symbols_[id - 1];
    else out += "\xef\xbf\xbd";
  }
  return out;
}

}  // namespace ascl::data
