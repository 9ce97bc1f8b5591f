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

#include "mgpc/codec/bitstream.h"

#include <algorithm>
#include <array>

#include "mgpc/common/bytes.h"
#include "mgpc/common/error.h"

namespace mgpc {
namespace {

constexpr std::array<uint8_t, 4> kMagic = {'M', 'G', 'P', 'C'};
constexpr std::array<double, 4> kRatePoints = {1000.0, 2000.0, 4000.0, 6000.0};

}  // namespace

uint8_t LambdaIdFor(double lambda) {
  for (size_t i = 0; i < kRatePoints.size(); ++i) {
    if (lambda == kRatePoints[i]) return static_cast<uint8_t>(i + 1);
  }
  return kLambdaCustom;
}

double LambdaFor(uint8_t lambda_id) {
  if (lambda_id >= 1 && lambda_id <= kRatePoints.size()) return kRatePoints[lambda_id - 1];
  return 0.0;
}

std::vector<uint8_t> Bitstream::Serialize() const {
  if (header.hyper_payload_len != hyper_payload.size()) {
    throw Error(ErrorCode::kCorruptStream, "header hyper length disagrees with payload");
  }
  ByteWriter w;
  w.PutBytes(kMagic);
  w.PutU8(kBitstreamVersion);
  w.PutU32(header.num_points);
  w.PutU32(header.original_length);
  w.PutU8(header.lambda_id);
  w.PutU32(header.hyper_payload_len);
  w.PutBytes(hyper_payload);
  w.PutBytes(main_payload);
  return w.Release();
}

Bitstream Bitstream::Parse(std::span<const uint8_t> bytes) {
  if (bytes.size() < kBitstreamHeaderBytes) {
    throw Error(ErrorCode::kTruncatedStream, "bitstream shorter than its header");
  }
  ByteReader r(bytes);
  auto magic = r.GetBytes(kMagic.size());
  if (!std::equal(magic.begin(), magic.end(), kMagic.begin())) {
    throw Error(ErrorCode::kCorruptStream, "not an MGPC bitstream");
  }
  const uint8_t version = r.GetU8();
  if (version != kBitstreamVersion) {
    throw Error(ErrorCode::kVersionMismatch,
                "unsupported bitstream version " + std::to_string(version));
  }
  Bitstream s;
  s.header.num_points = r.GetU32();
  s.header.original_length = r.GetU32();
  s.header.lambda_id = r.GetU8();
  s.header.hyper_payload_len = r.GetU32();
  if (s.header.hyper_payload_len > r.remaining()) {
    throw Error(ErrorCode::kTruncatedStream, "hyper payload extends past end of stream");
  }
  auto hyper = r.GetBytes(s.header.hyper_payload_len);
  s.hyper_payload.assign(hyper.begin(), hyper.end());
  auto main = r.GetBytes(r.remaining());
  s.main_payload.assign(main.begin(), main.end());
  return s;
}

double BitsPerPoint(size_t total_bytes, size_t num_points) {
  if (num_points == 0) throw Error(ErrorCode::kInvalidArgument, "bpp of zero points");
  return 8.0 * static_cast<double>(total_bytes) / static_cast<double>(num_points);
}

}  // namespace mgpc
