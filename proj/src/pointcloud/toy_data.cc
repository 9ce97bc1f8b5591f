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

#include "mgpc/pointcloud/toy_data.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mgpc/common/error.h"
#include "mgpc/common/rng.h"

namespace mgpc {
namespace {

size_t SurfaceCount(size_t side) {
  if (side == 1) return 1;
  return 6 * side * side - 12 * side + 8;
}

uint8_t ToByte(double v) { return static_cast<uint8_t>(std::clamp(std::round(v), 0.0, 255.0)); }

}  // namespace

PointCloud MakeToyCloud(size_t points, uint64_t seed) {
  if (points == 0) throw Error(ErrorCode::kInvalidArgument, "toy cloud needs at least one point");
  size_t side = 1;
  while (SurfaceCount(side) < points) ++side;
  if (side > (size_t{1} << 20)) throw Error(ErrorCode::kInvalidArgument, "toy cloud too large");

  std::vector<Position> surface;
  surface.reserve(SurfaceCount(side));
  const uint32_t last = static_cast<uint32_t>(side - 1);
  for (uint32_t x = 0; x <= last; ++x) {
    for (uint32_t y = 0; y <= last; ++y) {
      for (uint32_t z = 0; z <= last; ++z) {
        if (x == 0 || y == 0 || z == 0 || x == last || y == last || z == last) {
          surface.push_back({x, y, z});
        }
      }
    }
  }

  Rng rng(DeriveSeed(seed, {0}));
  // Keep a seeded subset of exactly `points` voxels, in raster order.
  std::vector<size_t> pick(surface.size());
  for (size_t i = 0; i < pick.size(); ++i) pick[i] = i;
  for (size_t i = 0; i < points; ++i) std::swap(pick[i], pick[i + rng.UniformInt(pick.size() - i)]);
  pick.resize(points);
  std::sort(pick.begin(), pick.end());

  double phase[3];
  double freq[3];
  for (int c = 0; c < 3; ++c) {
    phase[c] = 2.0 * std::numbers::pi * rng.Uniform();
    freq[c] = 1.0 + rng.Uniform();
  }
  const double s = static_cast<double>(side);
  const uint32_t lo = last / 4;
  const uint32_t hi = last - last / 4;

  PointCloud cloud;
  cloud.positions.reserve(points);
  cloud.colors.reserve(points);
  for (size_t idx : pick) {
    const Position& p = surface[idx];
    const double u = p[0] / s;
    const double v = p[1] / s;
    const double w = p[2] / s;
    double rgb[3] = {
        128.0 + 100.0 * std::sin(2.0 * std::numbers::pi * freq[0] * u + phase[0]) * std::cos(w),
        128.0 + 90.0 * std::sin(2.0 * std::numbers::pi * freq[1] * (v + 0.5 * w) + phase[1]),
        128.0 + 80.0 * std::cos(2.0 * std::numbers::pi * freq[2] * (u - v + w) + phase[2]),
    };
    // Checkerboard with 2-voxel cells on the z = 0 face.
    if (p[2] == 0 && p[0] >= lo && p[0] <= hi && p[1] >= lo && p[1] <= hi) {
      const bool dark = ((p[0] / 2) + (p[1] / 2)) % 2 == 0;
      rgb[0] = dark ? 30.0 : 225.0;
      rgb[1] = dark ? 40.0 : 215.0;
      rgb[2] = dark ? 50.0 : 205.0;
    }
    Color c;
    for (int k = 0; k < 3; ++k) {
      c[k] = ToByte(rgb[k] + static_cast<double>(rng.UniformInt(7)) - 3.0);
    }
    cloud.positions.push_back(p);
    cloud.colors.push_back(c);
  }
  cloud.resolution_bits = MinResolutionBits(cloud.positions);
  return cloud;
}

}  // namespace mgpc
