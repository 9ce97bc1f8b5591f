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

#ifndef MGPC_MULTIGEN_CONTROL_CODEC_H_
#define MGPC_MULTIGEN_CONTROL_CODEC_H_

#include <memory>

#include "mgpc/codec/codec.h"

namespace mgpc {

// Idempotent reference codec: the analysis scales normalized colors back to
// integers (x * 255), quantization around mu = 0 leaves them untouched, the
// synthesis divides by 255 and scale-and-round recovers the input exactly.
// Symbols are coded with a uniform model over [0, 255] (about 24 bpp).
class ControlCodec : public Codec {
 public:
  std::string name() const override { return "control"; }
  Bitstream Compress(const PointCloud& cloud) const override;
  PointCloud Decompress(const Bitstream& stream, const PointCloud& geometry) const override;
};

std::unique_ptr<Codec> MakeIdempotentControl();

}  // namespace mgpc

#endif  // MGPC_MULTIGEN_CONTROL_CODEC_H_
