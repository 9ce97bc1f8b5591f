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

#ifndef MGPC_TRAINING_LOSSES_H_
#define MGPC_TRAINING_LOSSES_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mgpc/codec/model.h"
#include "mgpc/tensor/tape.h"

namespace mgpc {

enum class ConstraintSet { kBaseline, kMic, kTrc, kLcc, kMicTrc, kMicLcc, kTrcLcc };

const std::vector<ConstraintSet>& AllConstraintSets();
std::string ConstraintSetName(ConstraintSet set);
// Accepts the names above ("MIC_TRC") and the "MIC+TRC" spelling, any case.
ConstraintSet ParseConstraintSet(std::string_view name);

// Which loss terms a constraint set contains. Sets with MIC replace the
// distortion term by the mapping-idempotency term.
struct ActiveTerms {
  bool distortion = false;
  bool mic = false;
  bool trc = false;
  bool lcc = false;
};
ActiveTerms TermsOf(ConstraintSet set);

// How the auxiliary distances are measured.
enum class DistanceKind { kMse, kSumSquares, kL2 };
std::string DistanceKindName(DistanceKind kind);
DistanceKind ParseDistanceKind(std::string_view name);

struct LossWeights {
  double lambda = 1000.0;
  double alpha = 1000.0;
  double beta = 100.0;
};

tensor::Var Distance(tensor::Var a, tensor::Var b, DistanceKind kind);

// (bits of y_noisy under N(mu, sigma) + bits of z_noisy under the prior)
// divided by num_points.
tensor::Var RateLoss(tensor::Var y_noisy, tensor::Var z_noisy, const EntropyParamVars& params,
                     const PriorVars& prior, size_t num_points);

struct LossOptions {
  // Rate on noise-perturbed latents; otherwise on the rounded ones.
  bool noise = true;
  uint64_t noise_seed = 0;
  DistanceKind distance = DistanceKind::kMse;
};

// The main training path on one padded block.
struct ForwardPass {
  tensor::Var x;  // (N_pad, 3) normalized input
  size_t num_points = 0;
  tensor::Var y;
  tensor::Var z;
  tensor::Var z_hat;  // straight-through rounding of z
  EntropyParamVars params;
  PriorVars prior;
  tensor::Var y_hat;  // straight-through centered quantization
  tensor::Var x_hat;  // f_D(y_hat), unclipped
  tensor::Var y_rate;  // y + noise (or y_hat)
  tensor::Var z_rate;  // z + noise (or z_hat)
};
ForwardPass RunForward(tensor::Tape& tape, const CodecModel& model, const tensor::Tensor& x_pad,
                       size_t num_points, const LossOptions& options);

struct PathResult {
  tensor::Var output;
  tensor::Var loss;
};

// normalize(f_SR(x_hat)), the deployed reconstruction; rows past
// num_points are padding.
tensor::Var DeployedReconstruction(const ForwardPass& pass);
// L_D: distance between input and x_hat over the unpadded rows.
tensor::Var DistortionLoss(const ForwardPass& pass, DistanceKind kind);
// x_MI = normalize(f_SR(f_D(f_Q(f_E(x))))).
PathResult MicPath(const ForwardPass& pass, DistanceKind kind);
// x_TR = f_D(f_E(x)), no quantization.
PathResult TrcPath(tensor::Tape& tape, const CodecModel& model, const ForwardPass& pass,
                   DistanceKind kind);
// y_LC = f_E(pad(normalize(f_SR(f_D(y_hat))))) against a detached y_hat.
PathResult LccPath(tensor::Tape& tape, const CodecModel& model, const ForwardPass& pass,
                   DistanceKind kind);

// Inactive terms hold invalid Vars.
struct LossTerms {
  tensor::Var rate;
  tensor::Var distortion;
  tensor::Var mic;
  tensor::Var trc;
  tensor::Var lcc;
  tensor::Var total;
};

LossTerms ComputeLoss(tensor::Tape& tape, const CodecModel& model, const tensor::Tensor& x_pad,
                      size_t num_points, ConstraintSet set, const LossWeights& weights,
                      const LossOptions& options);

// Combines already computed terms; the weights follow `set`.
tensor::Var ComposeTotal(const LossTerms& terms, ConstraintSet set, const LossWeights& weights);

}  // namespace mgpc

#endif  // MGPC_TRAINING_LOSSES_H_
