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

#ifndef MGPC_POINTCLOUD_PLY_H_
#define MGPC_POINTCLOUD_PLY_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "mgpc/pointcloud/point_cloud.h"

namespace mgpc {

enum class PlyFormat { kAscii, kBinaryLittleEndian };

// Accepts a single "vertex" element with x, y, z (any scalar PLY type) and
// red, green, blue (uchar). Float coordinates are rounded half away from zero.
// Anything else in the header is rejected.
PointCloud ParsePly(std::span<const uint8_t> bytes);

// x, y, z are written as float32 holding the exact integer coordinates.
std::vector<uint8_t> WritePly(const PointCloud& cloud, PlyFormat format);

PointCloud ReadPlyFile(const std::filesystem::path& path);
void WritePlyFile(const std::filesystem::path& path, const PointCloud& cloud,
                  PlyFormat format);

}  // namespace mgpc

#endif  // MGPC_POINTCLOUD_PLY_H_
