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

#ifndef MGPC_POINTCLOUD_SPATIAL_H_
#define MGPC_POINTCLOUD_SPATIAL_H_

#include <cstdint>
#include <vector>

#include "mgpc/pointcloud/point_cloud.h"

namespace mgpc {

inline constexpr int kMaxMortonBits = 21;

// Interleaves coordinate bits: bit i of x -> key bit 3i, y -> 3i+1,
// z -> 3i+2.
uint64_t MortonKey(const Position& p);

struct MortonPermutation {
  std::vector<uint64_t> keys;   // keys[i] belongs to point i
  std::vector<size_t> order;    // order[j] = index of the j-th point by key

  // inverse[i] = rank of point i in the sorted order.
  std::vector<size_t> Inverse() const;
};

// Stable sort of point indices by Morton key.
MortonPermutation MortonOrder(const PointCloud& cloud);

// Recursive KD halving until fewer than `max_points` remain. Each step splits
// the largest-variance axis at its (lower) median and keeps a seeded random
// half. The result keeps the input's relative point order.
PointCloud KdTreeCrop(const PointCloud& cloud, size_t max_points,
                      uint64_t seed);

// Same as KdTreeCrop but returns the surviving indices in ascending order.
std::vector<size_t> KdTreeCropIndices(const PointCloud& cloud,
                                      size_t max_points, uint64_t seed);

}  // namespace mgpc

#endif  // MGPC_POINTCLOUD_SPATIAL_H_
