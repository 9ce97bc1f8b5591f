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

#include "mgpc/training/losses.h"

#include <algorithm>
#include <cctype>
#include <numbers>

#include "mgpc/codec/entropy.h"
#include "mgpc/codec/quantize.h"
#include "mgpc/common/error.h"
#include "mgpc/common/rng.h"
#include "mgpc/tensor/ops.h"

namespace mgpc {

using tensor::Tape;
using tensor::Tensor;
using tensor::Var;

namespace {

std::string Canonical(std::string_view name) {
  std::string s;
  for (char c : name) s.push_back(c == '+' || c == '-' ? '_' : static_cast<char>(std::toupper(c)));
  return s;
}

Var Rows(Var x, size_t n) {
  return n == x.shape()[0] ? x : tensor::Slice(x, 0, 0, n);
}

// Repeats the last of the first n rows up to `rows` rows, as re-encoding a
// decoded cloud would.
Var EdgePadVar(Var x, size_t n, size_t rows) {
  Var head = Rows(x, n);
  if (n == rows) return head;
  std::vector<Var> parts{head};
  Var last = tensor::Slice(head, 0, n - 1, n);
  for (size_t i = n; i < rows; ++i) parts.push_back(last);
  return tensor::Concat(parts, 0);
}

}  // namespace

const std::vector<ConstraintSet>& AllConstraintSets() {
  static const std::vector<ConstraintSet> kAll = {
      ConstraintSet::kBaseline, ConstraintSet::kMic,    ConstraintSet::kTrc,
      ConstraintSet::kLcc,      ConstraintSet::kMicTrc, ConstraintSet::kMicLcc,
      ConstraintSet::kTrcLcc};
  return kAll;
}

std::string ConstraintSetName(ConstraintSet set) {
  switch (set) {
    case ConstraintSet::kBaseline: return "BASELINE";
    case ConstraintSet::kMic: return "MIC";
    case ConstraintSet::kTrc: return "TRC";
    case ConstraintSet::kLcc: return "LCC";
    case ConstraintSet::kMicTrc: return "MIC_TRC";
    case ConstraintSet::kMicLcc: return "MIC_LCC";
    case ConstraintSet::kTrcLcc: return "TRC_LCC";
  }
  return "?";
}

ConstraintSet ParseConstraintSet(std::string_view name) {
  const std::string canonical = Canonical(name);
  for (ConstraintSet set : AllConstraintSets()) {
    if (ConstraintSetName(set) == canonical) return set;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown constraint set '" + std::string(name) +
                  "' (expected BASELINE, MIC, TRC, LCC, MIC_TRC, MIC_LCC or TRC_LCC)");
}

ActiveTerms TermsOf(ConstraintSet set) {
  switch (set) {
    case ConstraintSet::kBaseline: return {true, false, false, false};
    case ConstraintSet::kMic: return {false, true, false, false};
    case ConstraintSet::kTrc: return {true, false, true, false};
    case ConstraintSet::kLcc: return {true, false, false, true};
    case ConstraintSet::kMicTrc: return {false, true, true, false};
    case ConstraintSet::kMicLcc: return {false, true, false, true};
    case ConstraintSet::kTrcLcc: return {true, false, true, true};
  }
  return {};
}

std::string DistanceKindName(DistanceKind kind) {
  switch (kind) {
    case DistanceKind::kMse: return "mse";
    case DistanceKind::kSumSquares: return "sse";
    case DistanceKind::kL2: return "l2";
  }
  return "?";
}

DistanceKind ParseDistanceKind(std::string_view name) {
  for (DistanceKind k : {DistanceKind::kMse, DistanceKind::kSumSquares, DistanceKind::kL2}) {
    if (DistanceKindName(k) == name) return k;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown distance '" + std::string(name) + "' (expected mse, sse or l2)");
}

Var Distance(Var a, Var b, DistanceKind kind) {
  switch (kind) {
    case DistanceKind::kMse: return tensor::MeanSquaredError(a, b);
    case DistanceKind::kSumSquares: return tensor::SumSquaredError(a, b);
    case DistanceKind::kL2: return tensor::Sqrt(tensor::SumSquaredError(a, b));
  }
  throw Error(ErrorCode::kInvalidArgument, "bad distance kind");
}

Var RateLoss(Var y_noisy, Var z_noisy, const EntropyParamVars& params, const PriorVars& prior,
             size_t num_points) {
  if (num_points == 0) throw Error(ErrorCode::kInvalidArgument, "rate of zero points");
  const size_t rows = z_noisy.shape()[0];
  Var z_mean = tensor::BroadcastRows(prior.mean, rows);
  Var z_sigma = tensor::BroadcastRows(prior.sigma, rows);
  Var bits = tensor::Add(InformationBitsVar(y_noisy, params.mu, params.sigma),
                         InformationBitsVar(z_noisy, z_mean, z_sigma));
  return tensor::DivScalar(bits, static_cast<double>(num_points));
}

ForwardPass RunForward(Tape& tape, const CodecModel& model, const Tensor& x_pad,
                       size_t num_points, const LossOptions& options) {
  if (num_points == 0 || num_points > x_pad.dim(0)) {
    throw Error(ErrorCode::kInvalidArgument, "block point count out of range");
  }
  ForwardPass p;
  p.num_points = num_points;
  p.x = tape.Constant(x_pad);
  p.y = Analyze(tape, model, p.x);
  p.z = HyperAnalyze(tape, model, p.y);
  p.z_hat = tensor::SteRound(p.z);
  p.params = HyperSynthesize(tape, model, p.z_hat);
  p.prior = HyperPrior(tape, model);
  p.y_hat = QuantizeCenteredSte(p.y, p.params.mu);
  p.x_hat = Synthesize(tape, model, p.y_hat);
  if (options.noise) {
    Rng rng(options.noise_seed);
    p.y_rate = tensor::AddUniformNoise(p.y, rng);
    p.z_rate = tensor::AddUniformNoise(p.z, rng);
  } else {
    p.y_rate = p.y_hat;
    p.z_rate = p.z_hat;
  }
  return p;
}

Var DeployedReconstruction(const ForwardPass& pass) {
  return NormalizeVar(ScaleRoundSte(pass.x_hat));
}

Var DistortionLoss(const ForwardPass& pass, DistanceKind kind) {
  return Distance(Rows(pass.x, pass.num_points), Rows(pass.x_hat, pass.num_points), kind);
}

PathResult MicPath(const ForwardPass& pass, DistanceKind kind) {
  Var x_mi = DeployedReconstruction(pass);
  return {x_mi, Distance(Rows(pass.x, pass.num_points), Rows(x_mi, pass.num_points), kind)};
}

PathResult TrcPath(Tape& tape, const CodecModel& model, const ForwardPass& pass,
                   DistanceKind kind) {
  Var x_tr = Synthesize(tape, model, pass.y);
  return {x_tr, Distance(Rows(pass.x, pass.num_points), Rows(x_tr, pass.num_points), kind)};
}

PathResult LccPath(Tape& tape, const CodecModel& model, const ForwardPass& pass,
                   DistanceKind kind) {
  Var x_next = EdgePadVar(DeployedReconstruction(pass), pass.num_points, pass.x.shape()[0]);
  Var y_lc = Analyze(tape, model, x_next);
  return {y_lc, Distance(tensor::Detach(pass.y_hat), y_lc, kind)};
}

Var ComposeTotal(const LossTerms& terms, ConstraintSet set, const LossWeights& weights) {
  const ActiveTerms active = TermsOf(set);
  Var total = terms.rate;
  auto add = [&](bool on, Var term, double w, const char* name) {
    if (!on) return;
    if (!term.valid()) {
      throw Error(ErrorCode::kInvalidArgument, std::string("missing loss term ") + name);
    }
    total = tensor::Add(total, tensor::MulScalar(term, w));
  };
  add(active.distortion, terms.distortion, weights.lambda, "L_D");
  add(active.mic, terms.mic, weights.lambda, "L_MI");
  add(active.trc, terms.trc, weights.alpha, "L_TR");
  add(active.lcc, terms.lcc, weights.beta, "L_LC");
  return total;
}

LossTerms ComputeLoss(Tape& tape, const CodecModel& model, const Tensor& x_pad,
                      size_t num_points, ConstraintSet set, const LossWeights& weights,
                      const LossOptions& options) {
  const ActiveTerms active = TermsOf(set);
  ForwardPass pass = RunForward(tape, model, x_pad, num_points, options);
  LossTerms t;
  t.rate = RateLoss(pass.y_rate, pass.z_rate, pass.params, pass.prior, num_points);
  if (active.distortion) t.distortion = DistortionLoss(pass, options.distance);
  if (active.mic) t.mic = MicPath(pass, options.distance).loss;
  if (active.trc) t.trc = TrcPath(tape, model, pass, options.distance).loss;
  if (active.lcc) t.lcc = LccPath(tape, model, pass, options.distance).loss;
  t.total = ComposeTotal(t, set, weights);
  return t;
}

}  // namespace mgpc
