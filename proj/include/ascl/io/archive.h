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

#ifndef ASCL_IO_ARCHIVE_H_
#define ASCL_IO_ARCHIVE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace ascl::io {

struct ArchiveTensor {
  std::vector<int64_t> shape;
  std::vector<double> values;
};

// Versioned binary container shared by checkpoints and the frozen speaker
// encoder blob. Little-endian layout:
//
//   char[8]  magic "ASCLARCH"
//   u32      format version (kArchiveVersion)
//   u64      metadata length, then that many bytes of UTF-8 JSON
//   u32      tensor count
//   per tensor, in ascending name order:
//     u32 name length, name bytes, u32 rank, i64[rank] dims,
//     f64[numel] values (row-major)
struct Archive {
  std::string metadata_json;
  std::map<std::string, ArchiveTensor> tensors;
};

inline constexpr uint32_t kArchiveVersion = 1;

void write_archive(const std::filesystem::path& path, const Archive& archive);
Archive read_archive(const std::filesystem::path& path);

// FNV-1a over (name, shape, value bytes) of every tensor in name order.
uint64_t checksum(const std::map<std::string, ArchiveTensor>& tensors);

std::string to_hex(uint64_t v);

}  // namespace ascl::io

#endif  // ASCL_IO_ARCHIVE_H_
