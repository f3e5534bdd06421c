// Copyright 2026 The ragbench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Little-endian primitives for the index snapshot formats.

#include <bit>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "ragbench/error.hpp"

namespace ragbench::detail {

inline constexpr std::uint32_t kSnapshotVersion = 1;

class LeWriter {
 public:
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<char>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<char>(v >> (8 * i)));
  }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void bytes(const std::string& s) { buf_.append(s); }

  std::size_t WriteTo(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
    if (!out) throw IoError("failed writing " + path.string());
    return buf_.size();
  }

 private:
  std::string buf_;
};

class LeReader {
 public:
  explicit LeReader(const std::filesystem::path& path) : path_(path.string()) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path_);
    buf_.assign(std::istreambuf_iterator<char>(in), {});
  }

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf_[pos_++]))
           << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf_[pos_++]))
           << (8 * i);
    return v;
  }
  float f32() { return std::bit_cast<float>(u32()); }
  std::string bytes(std::size_t n) {
    need(n);
    std::string s = buf_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  void ExpectMagic(const char* magic) {
    if (bytes(4) != magic)
      throw DataError(path_ + " is not a " + magic + " snapshot");
  }
  void ExpectEnd() const {
    if (pos_ != buf_.size())
      throw DataError(path_ + " has trailing bytes after the snapshot");
  }
  std::size_t remaining() const { return buf_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (buf_.size() - pos_ < n) throw DataError(path_ + " is truncated");
  }

  std::string path_;
  std::string buf_;
  std::size_t pos_ = 0;
};

inline void WriteIdTable(LeWriter& w, const std::vector<std::string>& ids) {
  for (const auto& id : ids) {
    w.u32(static_cast<std::uint32_t>(id.size()));
    w.bytes(id);
  }
}

inline std::vector<std::string> ReadIdTable(LeReader& r, std::uint64_t count) {
  std::vector<std::string> ids;
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto len = r.u32();
    ids.push_back(r.bytes(len));
  }
  return ids;
}

}  // namespace ragbench::detail
