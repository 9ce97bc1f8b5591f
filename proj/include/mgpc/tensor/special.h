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

#ifndef MGPC_TENSOR_SPECIAL_H_
#define MGPC_TENSOR_SPECIAL_H_

namespace mgpc::tensor {

// Error function and complement computed in software (series below 2.5,
// continued fraction above) so that every build evaluates entropy-model
// probabilities with the same operation sequence. Relative error is below
// 1e-13 over the whole real line.
double Erf(double x);
double Erfc(double x);

// Standard normal CDF and density.
double NormalCdf(double x);
double NormalPdf(double x);

// P(|N(0,1) - 0| in [lo, hi]) = Phi(hi) - Phi(lo) for lo <= hi, evaluated
// on the side of zero where it does not cancel.
double NormalInterval(double lo, double hi);

}  // namespace mgpc::tensor

#endif  // MGPC_TENSOR_SPECIAL_H_
