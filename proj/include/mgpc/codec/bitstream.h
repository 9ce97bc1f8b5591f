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

#ifndef MGPC_CODEC_BITSTREAM_H_
#define MGPC_CODEC_BITSTREAM_H_

#include <cstdint>
#include <span>
#include <vector>

namespace mgpc {

inline constexpr uint8_t kBitstreamVersion = 1;
// "MGPC", version, num_points, original_length, lambda_id, hyper_payload_len.
inline constexpr size_t kBitstreamHeaderBytes = 4 + 1 + 4 + 4 + 1 + 4;

// lambda_id values written into headers.
inline constexpr uint8_t kLambdaCustom = 0;
inline constexpr uint8_t kLambdaControl = 255;
// 1..4 <-> 1000, 2000, 4000, 6000; 0 for any other value.
uint8_t LambdaIdFor(double lambda);
double LambdaFor(uint8_t lambda_id);  // 0 when the id is not a rate point

struct BitstreamHeader {
  uint32_t num_points = 0;
  uint32_t original_length = 0;
  uint8_t lambda_id = 0;
  uint32_t hyper_payload_len = 0;

  bool operator==(const BitstreamHeader&) const = default;
};

struct Bitstream {
  BitstreamHeader header;
  std::vector<uint8_t> hyper_payload;
  std::vector<uint8_t> main_payload;

  size_t size_bytes() const {
    return kBitstreamHeaderBytes + hyper_payload.size() + main_payload.size();
  }
  std::vector<uint8_t> Serialize() const;
  // Errors: kTruncatedStream, kCorruptStream (bad magic), kVersionMismatch.
  static Bitstream Parse(std::span<const uint8_t> bytes);

  bool operator==(const Bitstream&) const = default;
};

// 8 * total_bytes / num_points.
double BitsPerPoint(size_t total_bytes, size_t num_points);

}  // namespace mgpc

#endif  // MGPC_CODEC_BITSTREAM_H_
