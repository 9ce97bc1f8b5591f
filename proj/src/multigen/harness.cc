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

#include "mgpc/multigen/harness.h"

#include "mgpc/common/error.h"

namespace mgpc {

GenerationTrace RunMultigen(const PointCloud& cloud, const Codec& codec, int generations,
                            const MultigenLabels& labels,
                            const std::function<void(int, const PointCloud&)>& on_generation) {
  if (generations < 1) throw Error(ErrorCode::kInvalidArgument, "generations must be >= 1");
  ValidateCloud(cloud);
  GenerationTrace trace{labels.sequence, labels.method, labels.rate_point, {}};
  PointCloud current = cloud;
  for (int k = 1; k <= generations; ++k) {
    try {
      std::vector<uint8_t> bytes = codec.Compress(current).Serialize();
      PointCloud next = codec.Decompress(Bitstream::Parse(bytes), cloud);
      trace.records.push_back({k, BitsPerPoint(bytes.size(), cloud.size()), PsnrY(cloud, next)});
      current = std::move(next);
    } catch (const Error& e) {
      throw Error(e.code(), "generation " + std::to_string(k) + ": " + e.what());
    }
    if (on_generation) on_generation(k, current);
  }
  return trace;
}

}  // namespace mgpc
