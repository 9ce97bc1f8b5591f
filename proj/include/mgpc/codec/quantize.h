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

#ifndef MGPC_CODEC_QUANTIZE_H_
#define MGPC_CODEC_QUANTIZE_H_

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "mgpc/pointcloud/point_cloud.h"
#include "mgpc/tensor/tape.h"

namespace mgpc {

// (N, 3) tensor of c / 255.
tensor::Tensor NormalizeColors(std::span<const Color> colors);

// Appends copies of the last row until the row count is a multiple of
// `multiple`.
tensor::Tensor EdgePadRows(const tensor::Tensor& x, size_t multiple);

// round(y - mu) + mu, ties away from zero.
inline double QuantizeCentered(double y, double mu) { return std::round(y - mu) + mu; }
tensor::Tensor QuantizeCentered(const tensor::Tensor& y, const tensor::Tensor& mu);

// round(clip(x, 0, 1) * 255). Throws kNonFinite for NaN or infinities.
uint8_t ScaleRound(double x);
// Applies ScaleRound to the first `rows` rows of an (N, 3) tensor.
std::vector<Color> ScaleRoundRows(const tensor::Tensor& x, size_t rows);

// Training-path counterparts. The forward values equal the functions above;
// rounding passes gradients straight through.
tensor::Var NormalizeVar(tensor::Var colors_0_255);
tensor::Var QuantizeCenteredSte(tensor::Var y, tensor::Var mu);
// Values in {0, ..., 255}.
tensor::Var ScaleRoundSte(tensor::Var x);

}  // namespace mgpc

#endif  // MGPC_CODEC_QUANTIZE_H_
