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

#ifndef MGPC_MULTIGEN_METRICS_H_
#define MGPC_MULTIGEN_METRICS_H_

#include <span>
#include <string>
#include <vector>

#include "mgpc/pointcloud/point_cloud.h"

namespace mgpc {

// PSNR values at or above this are written as this value in CSV files,
// together with a lossless flag.
inline constexpr double kPsnrCap = 99.99;

// 10 log10(255^2 / MSE_Y) over BT.709 luma; +inf when the lumas agree.
// Throws kGeometryMismatch unless positions match point for point.
double PsnrY(const PointCloud& reference, const PointCloud& test);

struct GenerationRecord {
  int k = 0;  // 1-based generation
  double bpp = 0.0;
  double psnr_y = 0.0;  // may be +inf
};

struct GenerationTrace {
  std::string sequence;
  std::string method;
  std::string rate_point;
  std::vector<GenerationRecord> records;  // records[i].k == i + 1
};

// PSNR-Y_{k-1} - PSNR-Y_k for k >= 2; two infinite values give 0.
double DeltaPsnrY(const GenerationTrace& trace, int k);
// PSNR-Y_1 - PSNR-Y_k for k >= 1; two infinite values give 0.
double PsnrYDrop(const GenerationTrace& trace, int k);

// ln(delta / max_drop). delta == 0 is "converged" (the log would be -inf);
// delta < 0 (quality improved) or max_drop <= 0 is "undefined".
struct DropConvergence {
  enum class Kind { kValue, kConverged, kUndefined };
  Kind kind = Kind::kUndefined;
  double value = 0.0;
};
DropConvergence DropConvergenceRate(double delta, double max_drop);
std::string DropConvergenceText(const DropConvergence& dcr);

// Largest PSNR-Y drop over every generation of every trace.
double MaxDrop(std::span<const GenerationTrace> traces);

// Copy with PSNR values capped at kPsnrCap, as stored in CSV files.
GenerationTrace CappedTrace(const GenerationTrace& trace);

}  // namespace mgpc

#endif  // MGPC_MULTIGEN_METRICS_H_
