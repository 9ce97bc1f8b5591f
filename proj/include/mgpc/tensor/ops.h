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

#ifndef MGPC_TENSOR_OPS_H_
#define MGPC_TENSOR_OPS_H_

#include <vector>

#include "mgpc/common/rng.h"
#include "mgpc/tensor/tape.h"

// Differentiable primitives. Every op records its adjoint on the tape of its
// inputs; shape errors name the offending shapes.
namespace mgpc::tensor {

// Elementwise, equal shapes.
Var Add(Var a, Var b);
Var Sub(Var a, Var b);
Var Mul(Var a, Var b);
Var Div(Var a, Var b);

Var AddScalar(Var x, double c);
Var MulScalar(Var x, double c);
// Exact division by c (not multiplication by 1/c).
Var DivScalar(Var x, double c);

Var Relu(Var x);
Var Exp(Var x);
Var Log(Var x);
Var Abs(Var x);
Var Square(Var x);
// The adjoint at 0 is taken as 0.
Var Sqrt(Var x);
// Gradient passes where lo <= x <= hi.
Var Clamp(Var x, double lo, double hi);
// Standard normal CDF.
Var GaussianCdf(Var x);

// Reductions to shape {1}.
Var Sum(Var x);
Var Mean(Var x);

// (M, K) x (K, N) -> (M, N).
Var MatMul(Var a, Var b);

// Rank-2 only: concatenation along axis 0 or 1.
Var Concat(const std::vector<Var>& parts, size_t axis);
// Half-open range [begin, end) along `axis` of a rank-1 or rank-2 tensor.
Var Slice(Var x, size_t axis, size_t begin, size_t end);
// Repeats a rank-1 (C) row into (rows, C).
Var BroadcastRows(Var row, size_t rows);

// 1-D convolution over a (length, channels) signal with weight
// (kernel, in_channels, out_channels) and bias (out_channels).
// Output length ceil(length / stride); "same" padding by edge replication.
Var Conv1d(Var input, Var weight, Var bias, size_t stride);
// Transposed counterpart: output length = length * stride. Input positions
// outside the signal are replaced by the nearest edge sample.
Var ConvTranspose1d(Var input, Var weight, Var bias, size_t stride);

// Round half away from zero; the adjoint is the identity (straight-through).
Var SteRound(Var x);
// x + U(-0.5, 0.5) i.i.d.; the adjoint is the identity.
Var AddUniformNoise(Var x, Rng& rng);
// Copy of the value with no gradient path.
Var Detach(Var x);

// Convenience compositions.
Var MeanSquaredError(Var a, Var b);
Var SumSquaredError(Var a, Var b);

}  // namespace mgpc::tensor

#endif  // MGPC_TENSOR_OPS_H_
