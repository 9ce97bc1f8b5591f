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

#include "mgpc/pointcloud/point_cloud.h"

#include <algorithm>
#include <string>

#include "mgpc/common/error.h"

namespace mgpc {

int MinResolutionBits(const std::vector<Position>& positions) {
  uint32_t max_coord = 0;
  for (const Position& p : positions) {
    for (uint32_t c : p) max_coord = std::max(max_coord, c);
  }
  int bits = 1;
  while (bits < 32 && (uint64_t{1} << bits) <= max_coord) ++bits;
  return bits;
}

void ValidateCloud(const PointCloud& cloud) {
  if (cloud.positions.empty()) {
    throw Error(ErrorCode::kEmptyCloud, "point cloud has no points");
  }
  if (cloud.positions.size() != cloud.colors.size()) {
    throw Error(ErrorCode::kCountMismatch,
                "point cloud has " + std::to_string(cloud.positions.size()) +
                    " positions but " + std::to_string(cloud.colors.size()) +
                    " colors");
  }
  if (cloud.resolution_bits < 1 || cloud.resolution_bits > 31) {
    throw Error(ErrorCode::kResolutionOverflow,
                "resolution_bits " + std::to_string(cloud.resolution_bits) +
                    " outside [1, 31]");
  }
  const uint64_t limit = uint64_t{1} << cloud.resolution_bits;
  for (const Position& p : cloud.positions) {
    for (uint32_t c : p) {
      if (c >= limit) {
        throw Error(ErrorCode::kResolutionOverflow,
                    "coordinate " + std::to_string(c) + " does not fit in " +
                        std::to_string(cloud.resolution_bits) + " bits");
      }
    }
  }
}

PointCloud SelectPoints(const PointCloud& cloud,
                        const std::vector<size_t>& indices) {
  PointCloud out;
  out.resolution_bits = cloud.resolution_bits;
  out.positions.reserve(indices.size());
  out.colors.reserve(indices.size());
  for (size_t i : indices) {
    out.positions.push_back(cloud.positions[i]);
    out.colors.push_back(cloud.colors[i]);
  }
  return out;
}

}  // namespace mgpc
