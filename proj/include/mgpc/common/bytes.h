// Copyright 2026 The MGPC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MGPC_COMMON_BYTES_H_
#define MGPC_COMMON_BYTES_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mgpc {

// Little-endian serialization helpers shared by the bitstream and checkpoint
// formats.
class ByteWriter {
 public:
  void PutU8(uint8_t v) { bytes_.push_back(v); }
  void PutU16(uint16_t v);
  void PutU32(uint32_t v);
  void PutU64(uint64_t v);
  void PutF64(double v);
  void PutBytes(std::span<const uint8_t> data);
  void PutString(std::string_view s);

  const std::vector<uint8_t>& bytes() const { return bytes_; }
  std::vector<uint8_t> Release() { return std::move(bytes_); }

 private:
  std::vector<uint8_t> bytes_;
};

// Reads fail with ErrorCode::kTruncatedStream when data runs out.
class ByteReader {
 public:
  explicit ByteReader(std::span<const uint8_t> data) : data_(data) {}

  uint8_t GetU8();
  uint16_t GetU16();
  uint32_t GetU32();
  uint64_t GetU64();
  double GetF64();
  std::span<const uint8_t> GetBytes(size_t n);

  size_t position() const { return pos_; }
  size_t remaining() const { return data_.size() - pos_; }

 private:
  void Require(size_t n) const;

  std::span<const uint8_t> data_;
  size_t pos_ = 0;
};

uint32_t Crc32(std::span<const uint8_t> data);

std::vector<uint8_t> ReadFileBytes(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it into place, so readers
// never observe a partially written file.
void WriteFileAtomic(const std::filesystem::path& path,
                     std::span<const uint8_t> data);
void WriteFileAtomic(const std::filesystem::path& path, std::string_view text);

}  // namespace mgpc

#endif  // MGPC_COMMON_BYTES_H_
