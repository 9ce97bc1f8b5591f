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

#include "mgpc/tensor/adam.h"

#include <cmath>

#include "mgpc/common/error.h"

namespace mgpc::tensor {

void AdamStep(std::span<Parameter* const> params, std::span<const Tensor> grads,
              AdamState& state, double lr) {
  if (params.size() != grads.size()) {
    throw Error(ErrorCode::kShapeMismatch, "adam: " + std::to_string(params.size()) +
                                               " parameters but " +
                                               std::to_string(grads.size()) + " gradients");
  }
  for (size_t i = 0; i < params.size(); ++i) {
    if (params[i]->value.shape() != grads[i].shape()) {
      throw Error(ErrorCode::kShapeMismatch,
                  "adam: gradient " + ShapeString(grads[i].shape()) + " for parameter '" +
                      params[i]->name + "' of shape " + ShapeString(params[i]->value.shape()));
    }
    if (!grads[i].AllFinite()) {
      throw Error(ErrorCode::kNonFinite,
                  "adam: non-finite gradient for parameter '" + params[i]->name + "'");
    }
  }
  if (state.first_moment.empty()) {
    for (Parameter* p : params) {
      state.first_moment.emplace_back(p->value.shape(), 0.0);
      state.second_moment.emplace_back(p->value.shape(), 0.0);
    }
  }
  if (state.first_moment.size() != params.size()) {
    throw Error(ErrorCode::kShapeMismatch, "adam: state tracks " +
                                               std::to_string(state.first_moment.size()) +
                                               " parameters, got " +
                                               std::to_string(params.size()));
  }
  const AdamOptions& o = state.options;
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(o.beta1, t);
  const double correction2 = 1.0 - std::pow(o.beta2, t);
  for (size_t i = 0; i < params.size(); ++i) {
    Tensor& m = state.first_moment[i];
    Tensor& v = state.second_moment[i];
    if (m.shape() != params[i]->value.shape()) {
      throw Error(ErrorCode::kShapeMismatch,
                  "adam: moment shape mismatch for parameter '" + params[i]->name + "'");
    }
    double* p = params[i]->value.data();
    const double* g = grads[i].data();
    for (size_t j = 0; j < m.size(); ++j) {
      m[j] = o.beta1 * m[j] + (1.0 - o.beta1) * g[j];
      v[j] = o.beta2 * v[j] + (1.0 - o.beta2) * g[j] * g[j];
      const double m_hat = m[j] / correction1;
      const double v_hat = v[j] / correction2;
      p[j] -= lr * m_hat / (std::sqrt(v_hat) + o.epsilon);
    }
  }
}

}  // namespace mgpc::tensor
