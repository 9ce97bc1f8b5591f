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

#include "mgpc/multigen/control_codec.h"

#include <cmath>

#include "mgpc/codec/entropy.h"
#include "mgpc/codec/quantize.h"
#include "mgpc/codec/range_coder.h"
#include "mgpc/common/error.h"

namespace mgpc {

Bitstream ControlCodec::Compress(const PointCloud& cloud) const {
  ValidateCloud(cloud);
  const tensor::Tensor x = NormalizeColors(cloud.colors);
  const QuantizedCdf table = UniformCdf(0, 255);
  RangeEncoder enc;
  for (double v : x.values()) {
    const double y = QuantizeCentered(v * 255.0, 0.0);
    EncodeValue(enc, table, static_cast<int32_t>(y));
  }
  Bitstream out;
  out.header.num_points = static_cast<uint32_t>(cloud.size());
  out.header.original_length = static_cast<uint32_t>(cloud.size());
  out.header.lambda_id = kLambdaControl;
  out.main_payload = enc.Finish();
  return out;
}

PointCloud ControlCodec::Decompress(const Bitstream& stream, const PointCloud& geometry) const {
  if (stream.header.num_points != geometry.size()) {
    throw Error(ErrorCode::kGeometryMismatch,
                "geometry has " + std::to_string(geometry.size()) + " points, stream has " +
                    std::to_string(stream.header.num_points));
  }
  const QuantizedCdf table = UniformCdf(0, 255);
  RangeDecoder dec(stream.main_payload);
  PointCloud out;
  out.positions = geometry.positions;
  out.resolution_bits = geometry.resolution_bits;
  out.colors.resize(geometry.size());
  for (Color& c : out.colors) {
    for (size_t ch = 0; ch < 3; ++ch) c[ch] = ScaleRound(DecodeValue(dec, table) / 255.0);
  }
  return out;
}

std::unique_ptr<Codec> MakeIdempotentControl() { return std::make_unique<ControlCodec>(); }

}  // namespace mgpc
