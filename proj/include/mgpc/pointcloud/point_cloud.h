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

#ifndef MGPC_POINTCLOUD_POINT_CLOUD_H_
#define MGPC_POINTCLOUD_POINT_CLOUD_H_

#include <array>
#include <cstdint>
#include <vector>

namespace mgpc {

using Position = std::array<uint32_t, 3>;
using Color = std::array<uint8_t, 3>;

// Voxelized geometry plus one 8-bit RGB triple per point. Positions and
// colors are parallel arrays.
struct PointCloud {
  std::vector<Position> positions;
  std::vector<Color> colors;
  int resolution_bits = 1;

  size_t size() const { return positions.size(); }
  bool empty() const { return positions.empty(); }

  bool operator==(const PointCloud&) const = default;
};

// Smallest b >= 1 such that every coordinate is < 2^b.
int MinResolutionBits(const std::vector<Position>& positions);

// Throws kEmptyCloud, kCountMismatch or kResolutionOverflow when the
// PointCloud invariants do not hold.
void ValidateCloud(const PointCloud& cloud);

// Picks the subset `indices` (in the given order).
PointCloud SelectPoints(const PointCloud& cloud,
                        const std::vector<size_t>& indices);

}  // namespace mgpc

#endif  // MGPC_POINTCLOUD_POINT_CLOUD_H_
