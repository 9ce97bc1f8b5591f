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

#ifndef MGPC_POINTCLOUD_LUMA_H_
#define MGPC_POINTCLOUD_LUMA_H_

#include <cstdint>
#include <span>
#include <vector>

#include "mgpc/pointcloud/point_cloud.h"

namespace mgpc {

// BT.709 full-range luma scaled by 10^4, exact in integers:
// 2126 R + 7152 G + 722 B.
inline int32_t LumaTimes10k(const Color& c) {
  return 2126 * c[0] + 7152 * c[1] + 722 * c[2];
}

// Y = 0.2126 R + 0.7152 G + 0.0722 B in [0, 255]. Computed as one division of
// the exact integer numerator so that white maps to exactly 255.
inline double Luma(const Color& c) { return LumaTimes10k(c) / 10000.0; }

std::vector<double> YChannel(std::span<const Color> colors);

}  // namespace mgpc

#endif  // MGPC_POINTCLOUD_LUMA_H_
