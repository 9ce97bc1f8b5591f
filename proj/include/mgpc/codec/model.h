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

#ifndef MGPC_CODEC_MODEL_H_
#define MGPC_CODEC_MODEL_H_

#include <cstdint>
#include <span>
#include <vector>

#include "mgpc/tensor/checkpoint.h"
#include "mgpc/tensor/tape.h"

namespace mgpc {

// Channel widths. The defaults are the reference toy topology; smaller
// widths exist for gradient checks on micro models.
struct ModelConfig {
  size_t hidden = 64;
  size_t latent = 32;
  size_t hyper = 16;

  bool operator==(const ModelConfig&) const = default;
};

// Analysis downsamples by 4, hyper-analysis by a further 2.
inline constexpr size_t kLatentStride = 4;
inline constexpr size_t kPadMultiple = 8;

struct ConvLayerSpec {
  size_t in_channels;
  size_t out_channels;
  size_t kernel;
  size_t stride;
  bool transposed;
  bool relu;
};

struct ConvLayer {
  ConvLayerSpec spec;
  tensor::Parameter weight;  // (kernel, in, out)
  tensor::Parameter bias;    // (out)
};

struct ConvStack {
  std::vector<ConvLayer> layers;

  tensor::Var Forward(tensor::Tape& tape, tensor::Var x) const;
};

// Every trainable array of the codec: analysis f_E, synthesis f_D, the
// hyper-analysis/-synthesis pair and the per-channel Gaussian prior on the
// hyper-latent.
//   f_E: conv(3->H,k5,s2) relu, conv(H->H,k5,s2) relu, conv(H->C,k3,s1)
//   f_D: tconv(C->H,k3,s1) relu, tconv(H->H,k5,s2) relu, tconv(H->3,k5,s2)
//   h_a: conv(C->Z,k3,s2) relu, conv(Z->Z,k3,s1)
//   h_s: tconv(Z->Z,k3,s1) relu, tconv(Z->2C,k3,s2) -> (mu, sigma_raw)
struct CodecModel {
  ModelConfig config;
  ConvStack analysis;
  ConvStack synthesis;
  ConvStack hyper_analysis;
  ConvStack hyper_synthesis;
  tensor::Parameter prior_mean;       // (Z)
  tensor::Parameter prior_log_scale;  // (Z)
  uint8_t lambda_id = 0;

  std::vector<tensor::Parameter*> Parameters();
  std::vector<const tensor::Parameter*> Parameters() const;
  size_t NumScalars() const;
  bool AllFinite() const;
};

// Zero-valued parameters.
CodecModel MakeZeroModel(const ModelConfig& config = {});

// Glorot-uniform weights, zero biases (the output bias starts at mid-gray),
// seeded.
CodecModel MakeRandomModel(uint64_t seed, const ModelConfig& config = {});

// Parameters that make analysis/synthesis an exact pass-through: each latent
// position carries the 4 x 3 input samples it covers multiplied by
// `latent_scale` in channels 0..11; the hyper-prior predicts mu = 0 and
// sigma = `sigma`. Uses the default widths. With latent_scale = 255 the latents of 8-bit colors are
// integers and centered quantization is lossless.
CodecModel MakeIdentityModel(double latent_scale = 255.0, double sigma = 100.0);

// Checkpoint conversion. Parameter names are "<stack>.<layer>.weight|bias",
// "prior.mean", "prior.log_scale"; widths and lambda_id are stored as
// "meta.*" scalars.
std::vector<tensor::NamedTensor> ModelToEntries(const CodecModel& model);
// Reads the model entries out of a checkpoint (extra entries are ignored).
CodecModel ModelFromEntries(std::span<const tensor::NamedTensor> entries);

// ---- the transforms, on a tape ----

// x: (N_pad, 3) with N_pad a positive multiple of 8 -> y: (N_pad / 4, C).
tensor::Var Analyze(tensor::Tape& tape, const CodecModel& model, tensor::Var x);
// y_hat: (L, C) -> x_hat: (4 L, 3), unclipped.
tensor::Var Synthesize(tensor::Tape& tape, const CodecModel& model, tensor::Var y_hat);
// y: (L, C) -> z: (L / 2, Z).
tensor::Var HyperAnalyze(tensor::Tape& tape, const CodecModel& model, tensor::Var y);

struct EntropyParamVars {
  tensor::Var mu;     // (L, C)
  tensor::Var sigma;  // (L, C), clamp(exp(raw), 1e-3, 1e3)
};
// z_hat: (L / 2, Z) -> mu, sigma: (L, C).
EntropyParamVars HyperSynthesize(tensor::Tape& tape, const CodecModel& model,
                                 tensor::Var z_hat);

struct PriorVars {
  tensor::Var mean;   // (Z)
  tensor::Var sigma;  // (Z)
};
PriorVars HyperPrior(tensor::Tape& tape, const CodecModel& model);

}  // namespace mgpc

#endif  // MGPC_CODEC_MODEL_H_
