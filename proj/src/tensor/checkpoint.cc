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

#include "mgpc/tensor/checkpoint.h"

#include <algorithm>

#include "mgpc/common/bytes.h"
#include "mgpc/common/error.h"

namespace mgpc::tensor {
namespace {

constexpr char kMagic[4] = {'M', 'G', 'C', 'K'};

}  // namespace

std::vector<uint8_t> EncodeCheckpoint(std::span<const NamedTensor> entries) {
  ByteWriter w;
  w.PutString(std::string_view(kMagic, 4));
  w.PutU32(kCheckpointVersion);
  w.PutU32(static_cast<uint32_t>(entries.size()));
  for (const NamedTensor& e : entries) {
    if (e.name.size() > UINT16_MAX) {
      throw Error(ErrorCode::kInvalidArgument, "checkpoint entry name too long");
    }
    w.PutU16(static_cast<uint16_t>(e.name.size()));
    w.PutString(e.name);
    w.PutU8(static_cast<uint8_t>(e.tensor.rank()));
    for (size_t d : e.tensor.shape()) w.PutU32(static_cast<uint32_t>(d));
    for (double v : e.tensor.values()) w.PutF64(v);
  }
  const uint32_t crc = Crc32(w.bytes());
  w.PutU32(crc);
  return w.Release();
}

std::vector<NamedTensor> DecodeCheckpoint(std::span<const uint8_t> bytes) {
  if (bytes.size() < 16) {
    throw Error(ErrorCode::kTruncatedStream, "checkpoint shorter than its fixed header");
  }
  const auto body = bytes.first(bytes.size() - 4);
  ByteReader trailer(bytes.last(4));
  if (Crc32(body) != trailer.GetU32()) {
    throw Error(ErrorCode::kChecksumMismatch, "checkpoint checksum mismatch");
  }
  ByteReader r(body);
  const auto magic = r.GetBytes(4);
  if (!std::equal(magic.begin(), magic.end(), kMagic)) {
    throw Error(ErrorCode::kCorruptStream, "not a checkpoint file (bad magic)");
  }
  const uint32_t version = r.GetU32();
  if (version != kCheckpointVersion) {
    throw Error(ErrorCode::kVersionMismatch,
                "checkpoint version " + std::to_string(version) + " unsupported");
  }
  const uint32_t count = r.GetU32();
  std::vector<NamedTensor> out;
  for (uint32_t i = 0; i < count; ++i) {
    NamedTensor e;
    const uint16_t name_len = r.GetU16();
    const auto name = r.GetBytes(name_len);
    e.name.assign(name.begin(), name.end());
    const uint8_t rank = r.GetU8();
    Shape shape(rank);
    for (auto& d : shape) d = r.GetU32();
    const size_t n = NumElements(shape);
    if (n * 8 > r.remaining()) {
      throw Error(ErrorCode::kTruncatedStream, "checkpoint entry '" + e.name + "' truncated");
    }
    std::vector<double> data(n);
    for (double& v : data) v = r.GetF64();
    e.tensor = Tensor(std::move(shape), std::move(data));
    out.push_back(std::move(e));
  }
  if (r.remaining() != 0) {
    throw Error(ErrorCode::kCorruptStream, "trailing bytes after checkpoint entries");
  }
  return out;
}

void SaveCheckpoint(const std::filesystem::path& path, std::span<const NamedTensor> entries) {
  WriteFileAtomic(path, EncodeCheckpoint(entries));
}

std::vector<NamedTensor> LoadCheckpoint(const std::filesystem::path& path) {
  return DecodeCheckpoint(ReadFileBytes(path));
}

}  // namespace mgpc::tensor
