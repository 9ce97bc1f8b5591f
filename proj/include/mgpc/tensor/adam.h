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

#ifndef MGPC_TENSOR_ADAM_H_
#define MGPC_TENSOR_ADAM_H_

#include <cstdint>
#include <span>
#include <vector>

#include "mgpc/tensor/tape.h"

namespace mgpc::tensor {

struct AdamOptions {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Moment buffers are parallel to the parameter list handed to AdamStep and
// are created on the first step.
struct AdamState {
  AdamOptions options;
  int64_t step = 0;
  std::vector<Tensor> first_moment;
  std::vector<Tensor> second_moment;
};

// One bias-corrected Adam update. Throws kNonFinite naming the parameter
// when its gradient has a NaN or infinity, before touching any state.
void AdamStep(std::span<Parameter* const> params, std::span<const Tensor> grads,
              AdamState& state, double lr);

}  // namespace mgpc::tensor

#endif  // MGPC_TENSOR_ADAM_H_
