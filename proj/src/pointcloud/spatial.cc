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

#include "mgpc/pointcloud/spatial.h"

#include <algorithm>
#include <numeric>
#include <string>

#include "mgpc/common/error.h"
#include "mgpc/common/rng.h"

namespace mgpc {
namespace {

uint64_t SpreadBits(uint32_t v) {
  uint64_t x = v & 0x1fffff;
  x = (x | (x << 32)) & 0x1f00000000ffffULL;
  x = (x | (x << 16)) & 0x1f0000ff0000ffULL;
  x = (x | (x << 8)) & 0x100f00f00f00f00fULL;
  x = (x | (x << 4)) & 0x10c30c30c30c30c3ULL;
  x = (x | (x << 2)) & 0x1249249249249249ULL;
  return x;
}

}  // namespace

uint64_t MortonKey(const Position& p) {
  return SpreadBits(p[0]) | (SpreadBits(p[1]) << 1) | (SpreadBits(p[2]) << 2);
}

std::vector<size_t> MortonPermutation::Inverse() const {
  std::vector<size_t> inv(order.size());
  for (size_t j = 0; j < order.size(); ++j) inv[order[j]] = j;
  return inv;
}

MortonPermutation MortonOrder(const PointCloud& cloud) {
  if (cloud.resolution_bits > kMaxMortonBits) {
    throw Error(ErrorCode::kResolutionOverflow,
                "morton keys need resolution_bits <= 21, got " +
                    std::to_string(cloud.resolution_bits));
  }
  MortonPermutation perm;
  perm.keys.reserve(cloud.size());
  for (const Position& p : cloud.positions) {
    for (uint32_t c : p) {
      if (c >= (1u << kMaxMortonBits)) {
        throw Error(ErrorCode::kResolutionOverflow,
                    "coordinate " + std::to_string(c) + " exceeds 21 bits");
      }
    }
    perm.keys.push_back(MortonKey(p));
  }
  perm.order.resize(cloud.size());
  std::iota(perm.order.begin(), perm.order.end(), size_t{0});
  std::stable_sort(perm.order.begin(), perm.order.end(),
                   [&](size_t a, size_t b) { return perm.keys[a] < perm.keys[b]; });
  return perm;
}

std::vector<size_t> KdTreeCropIndices(const PointCloud& cloud,
                                      size_t max_points, uint64_t seed) {
  if (max_points < 2) {
    throw Error(ErrorCode::kInvalidArgument, "crop size K must be at least 2");
  }
  std::vector<size_t> current(cloud.size());
  std::iota(current.begin(), current.end(), size_t{0});
  Rng rng(seed);
  while (current.size() >= max_points) {
    // Largest-variance axis; ties go to the lower axis index.
    int axis = 0;
    double best = -1.0;
    for (int d = 0; d < 3; ++d) {
      double mean = 0.0;
      for (size_t i : current) mean += cloud.positions[i][d];
      mean /= static_cast<double>(current.size());
      double var = 0.0;
      for (size_t i : current) {
        const double diff = cloud.positions[i][d] - mean;
        var += diff * diff;
      }
      if (var > best) {
        best = var;
        axis = d;
      }
    }
    std::stable_sort(current.begin(), current.end(), [&](size_t a, size_t b) {
      return cloud.positions[a][axis] < cloud.positions[b][axis];
    });
    // The lower half takes the median element when the count is odd.
    const size_t lower = (current.size() + 1) / 2;
    if (rng.Coin()) {
      current.erase(current.begin() + static_cast<std::ptrdiff_t>(lower), current.end());
    } else {
      current.erase(current.begin(), current.begin() + static_cast<std::ptrdiff_t>(lower));
    }
    std::sort(current.begin(), current.end());
  }
  return current;
}

PointCloud KdTreeCrop(const PointCloud& cloud, size_t max_points, uint64_t seed) {
  return SelectPoints(cloud, KdTreeCropIndices(cloud, max_points, seed));
}

}  // namespace mgpc
