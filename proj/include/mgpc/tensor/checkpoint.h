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

#ifndef MGPC_TENSOR_CHECKPOINT_H_
#define MGPC_TENSOR_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mgpc/tensor/tensor.h"

namespace mgpc::tensor {

struct NamedTensor {
  std::string name;
  Tensor tensor;

  bool operator==(const NamedTensor&) const = default;
};

// Layout (little-endian):
//   "MGCK" | u32 version | u32 count |
//   count x { u16 name_len | name | u8 rank | u32 dims[rank] | f64 data[] } |
//   u32 crc32 of every preceding byte
inline constexpr uint32_t kCheckpointVersion = 1;

std::vector<uint8_t> EncodeCheckpoint(std::span<const NamedTensor> entries);
// Throws kChecksumMismatch, kVersionMismatch, kCorruptStream or
// kTruncatedStream.
std::vector<NamedTensor> DecodeCheckpoint(std::span<const uint8_t> bytes);

void SaveCheckpoint(const std::filesystem::path& path, std::span<const NamedTensor> entries);
std::vector<NamedTensor> LoadCheckpoint(const std::filesystem::path& path);

}  // namespace mgpc::tensor

#endif  // MGPC_TENSOR_CHECKPOINT_H_
