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

#include "mgpc/multigen/metrics.h"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "mgpc/common/error.h"
#include "mgpc/pointcloud/luma.h"

namespace mgpc {
namespace {

const GenerationRecord& RecordAt(const GenerationTrace& trace, int k) {
  if (k < 1 || static_cast<size_t>(k) > trace.records.size()) {
    throw Error(ErrorCode::kInvalidArgument, "generation " + std::to_string(k) +
                                                 " outside trace of length " +
                                                 std::to_string(trace.records.size()));
  }
  return trace.records[k - 1];
}

double Difference(double a, double b) {
  if (std::isinf(a) && std::isinf(b) && a == b) return 0.0;
  return a - b;
}

}  // namespace

double PsnrY(const PointCloud& reference, const PointCloud& test) {
  if (reference.positions != test.positions || reference.colors.size() != test.colors.size()) {
    throw Error(ErrorCode::kGeometryMismatch, "PSNR-Y needs identical geometry and point order");
  }
  if (reference.empty()) throw Error(ErrorCode::kEmptyCloud, "PSNR-Y of an empty cloud");
  // Sum of squared luma differences in units of 1e-8, exact.
  __int128 sum = 0;
  for (size_t i = 0; i < reference.size(); ++i) {
    const int64_t d = LumaTimes10k(reference.colors[i]) - LumaTimes10k(test.colors[i]);
    sum += static_cast<__int128>(d * d);
  }
  if (sum == 0) return HUGE_VAL;
  const double mse = static_cast<double>(sum) / 1e8 / static_cast<double>(reference.size());
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

double DeltaPsnrY(const GenerationTrace& trace, int k) {
  if (k < 2) throw Error(ErrorCode::kInvalidArgument, "delta PSNR-Y needs k >= 2");
  return Difference(RecordAt(trace, k - 1).psnr_y, RecordAt(trace, k).psnr_y);
}

double PsnrYDrop(const GenerationTrace& trace, int k) {
  return Difference(RecordAt(trace, 1).psnr_y, RecordAt(trace, k).psnr_y);
}

DropConvergence DropConvergenceRate(double delta, double max_drop) {
  if (delta == 0.0) return {DropConvergence::Kind::kConverged, -HUGE_VAL};
  if (!(delta > 0.0) || !(max_drop > 0.0) || std::isinf(delta) || std::isinf(max_drop)) {
    return {DropConvergence::Kind::kUndefined, std::nan("")};
  }
  return {DropConvergence::Kind::kValue, std::log(delta / max_drop)};
}

std::string DropConvergenceText(const DropConvergence& dcr) {
  switch (dcr.kind) {
    case DropConvergence::Kind::kConverged: return "converged";
    case DropConvergence::Kind::kUndefined: return "undefined";
    case DropConvergence::Kind::kValue: break;
  }
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, dcr.value);
  return std::string(buf, end);
}

double MaxDrop(std::span<const GenerationTrace> traces) {
  double best = 0.0;
  for (const GenerationTrace& t : traces) {
    for (int k = 1; k <= static_cast<int>(t.records.size()); ++k) {
      best = std::max(best, PsnrYDrop(t, k));
    }
  }
  return best;
}

GenerationTrace CappedTrace(const GenerationTrace& trace) {
  GenerationTrace out = trace;
  for (GenerationRecord& r : out.records) r.psnr_y = std::min(r.psnr_y, kPsnrCap);
  return out;
}

}  // namespace mgpc
