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

#include "mgpc/codec/quantize.h"

#include <algorithm>
#include <cmath>

#include "mgpc/common/error.h"
#include "mgpc/tensor/ops.h"

namespace mgpc {

using tensor::Tensor;
using tensor::Var;

Tensor NormalizeColors(std::span<const Color> colors) {
  Tensor x({colors.size(), 3});
  for (size_t i = 0; i < colors.size(); ++i) {
    for (size_t c = 0; c < 3; ++c) x.at(i, c) = colors[i][c] / 255.0;
  }
  return x;
}

Tensor EdgePadRows(const Tensor& x, size_t multiple) {
  if (x.rank() != 2 || x.dim(0) == 0) {
    throw Error(ErrorCode::kShapeMismatch, "cannot pad " + tensor::ShapeString(x.shape()));
  }
  const size_t rows = x.dim(0);
  const size_t cols = x.dim(1);
  const size_t padded = (rows + multiple - 1) / multiple * multiple;
  std::vector<double> data(x.vector());
  data.reserve(padded * cols);
  for (size_t r = rows; r < padded; ++r) {
    data.insert(data.end(), x.data() + (rows - 1) * cols, x.data() + rows * cols);
  }
  return Tensor({padded, cols}, std::move(data));
}

Tensor QuantizeCentered(const Tensor& y, const Tensor& mu) {
  if (y.shape() != mu.shape()) {
    throw Error(ErrorCode::kShapeMismatch, "quantize " + tensor::ShapeString(y.shape()) +
                                               " around " + tensor::ShapeString(mu.shape()));
  }
  Tensor out(y.shape());
  for (size_t i = 0; i < y.size(); ++i) out[i] = QuantizeCentered(y[i], mu[i]);
  return out;
}

uint8_t ScaleRound(double x) {
  if (!std::isfinite(x)) throw Error(ErrorCode::kNonFinite, "non-finite reconstruction value");
  return static_cast<uint8_t>(std::round(std::clamp(x, 0.0, 1.0) * 255.0));
}

std::vector<Color> ScaleRoundRows(const Tensor& x, size_t rows) {
  if (x.rank() != 2 || x.dim(1) != 3 || x.dim(0) < rows) {
    throw Error(ErrorCode::kShapeMismatch,
                "cannot restore " + std::to_string(rows) + " colors from " +
                    tensor::ShapeString(x.shape()));
  }
  std::vector<Color> out(rows);
  for (size_t i = 0; i < rows; ++i) {
    for (size_t c = 0; c < 3; ++c) out[i][c] = ScaleRound(x.at(i, c));
  }
  return out;
}

Var NormalizeVar(Var colors_0_255) { return tensor::DivScalar(colors_0_255, 255.0); }

Var QuantizeCenteredSte(Var y, Var mu) {
  return tensor::Add(tensor::SteRound(tensor::Sub(y, mu)), mu);
}

Var ScaleRoundSte(Var x) {
  return tensor::SteRound(tensor::MulScalar(tensor::Clamp(x, 0.0, 1.0), 255.0));
}

}  // namespace mgpc
