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

#ifndef MGPC_POINTCLOUD_TOY_DATA_H_
#define MGPC_POINTCLOUD_TOY_DATA_H_

#include <cstddef>
#include <cstdint>

#include "mgpc/pointcloud/point_cloud.h"

namespace mgpc {

// Voxelized cube surface with `points` distinct voxels. Colors are smooth
// seeded sinusoidal gradients with a high-contrast checkerboard patch on one
// face and +-3 uniform noise. Deterministic given (points, seed).
PointCloud MakeToyCloud(size_t points, uint64_t seed);

}  // namespace mgpc

#endif  // MGPC_POINTCLOUD_TOY_DATA_H_
