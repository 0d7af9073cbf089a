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

#include "ascl/io/archive.h"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "ascl/error.h"

namespace ascl::io {

static_assert(std::endian::native == std::endian::little,
              "archive I/O assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'A', 'S', 'C', 'L', 'A', 'R', 'C', 'H'};

template <typename T>
void put(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in, const std::filesystem::path& path) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw Error(ErrorKind::kCheckpointError, path.string() + ": truncated archive");
  return v;
}

std::string get_bytes(std::istream& in, uint64_t n, const std::filesystem::path& path) {
  constexpr uint64_t kLimit = uint64_t{1} << 32;
  if (n > kLimit) throw Error(ErrorKind::kCheckpointError, path.string() + ": corrupt length");
  std::string s(n, '\0');
  in.read(s.data(), static_cast<std::streamsize>(n));
  if (!in) throw Error(ErrorKind::kCheckpointError, path.string() + ": truncated archive");
  return s;
}

void fnv(uint64_t& h, const void* data, size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
}

}  // namespace

void write_archive(const std::filesystem::path& path, const Archive& archive) {
  // Write-then-rename so a crash never leaves a half-written checkpoint.
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error(ErrorKind::kIoError, "cannot write " + tmp.string());
    out.write(kMagic, sizeof(kMagic));
    put<uint32_t>(out, kArchiveVersion);
    put<uint64_t>(out, archive.metadata_json.size());
    out.write(archive.metadata_json.data(),
              static_cast<std::streamsize>(archive.metadata_json.size()));
    put<uint32_t>(out, static_cast<uint32_t>(archive.tensors.size()));
    for (const auto& [name, t] : archive.tensors) {
      put<uint32_t>(out, static_cast<uint32_t>(name.size()));
      out.write(name.data(), static_cast<std::streamsize>(name.size()));
      put<uint32_t>(out, static_cast<uint32_t>(t.shape.size()));
      for (int64_t d : t.shape) put<int64_t>(out, d);
      out.write(reinterpret_cast<const char*>(t.values.data()),
                static_cast<std::streamsize>(t.values.size() * sizeof(double)));
    }
    if (!out) throw Error(ErrorKind::kIoError, "write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Archive read_archive(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kMissingFile, path.string());
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw Error(ErrorKind::kCheckpointError, path.string() + ": bad magic");
  }
  const auto version = get<uint32_t>(in, path);
  if (version != kArchiveVersion) {
    throw Error(ErrorKind::kCheckpointError,
                path.string() + ": unsupported archive version " + std::to_string(version));
  }
  Archive archive;
  archive.metadata_json = get_bytes(in, get<uint64_t>(in, path), path);
  const auto count = get<uint32_t>(in, path);
  for (uint32_t i = 0; i < count; ++i) {
    std::string name = get_bytes(in, get<uint32_t>(in, path), path);
    ArchiveTensor t;
    const auto rank = get<uint32_t>(in, path);
    int64_t numel = 1;
    for (uint32_t r = 0; r < rank; ++r) {
      const auto d = get<int64_t>(in, path);
      if (d < 0) throw Error(ErrorKind::kCheckpointError, path.string() + ": negative dim");
      t.shape.push_back(d);
      numel *= d;
    }
    const std::string raw = get_bytes(in, static_cast<uint64_t>(numel) * sizeof(double), path);
    t.values.resize(numel);
    std::memcpy(t.values.data(), raw.data(), raw.size());
    archive.tensors.emplace(std::move(name), std::move(t));
  }
  return archive;
}

uint64_t checksum(const std::map<std::string, ArchiveTensor>& tensors) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& [name, t] : tensors) {
    fnv(h, name.data(), name.size());
    fnv(h, t.shape.data(), t.shape.size() * sizeof(int64_t));
    fnv(h, t.values.data(), t.values.size() * sizeof(double));
  }
  return h;
}

std::string to_hex(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace ascl::io
