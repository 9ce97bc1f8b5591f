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

#include "mgpc/codec/model.h"

#include <cmath>
#include <string>
#include <unordered_map>

#include "mgpc/common/error.h"
#include "mgpc/common/rng.h"
#include "mgpc/tensor/ops.h"

namespace mgpc {

using tensor::NamedTensor;
using tensor::Parameter;
using tensor::Tape;
using tensor::Tensor;
using tensor::Var;

namespace {

struct StackSpec {
  const char* name;
  std::vector<ConvLayerSpec> layers;
};

std::vector<StackSpec> Topology(const ModelConfig& c) {
  const size_t h = c.hidden;
  const size_t l = c.latent;
  const size_t z = c.hyper;
  return {
      {"analysis", {{3, h, 5, 2, false, true}, {h, h, 5, 2, false, true}, {h, l, 3, 1, false, false}}},
      {"synthesis", {{l, h, 3, 1, true, true}, {h, h, 5, 2, true, true}, {h, 3, 5, 2, true, false}}},
      {"hyper_analysis", {{l, z, 3, 2, false, true}, {z, z, 3, 1, false, false}}},
      {"hyper_synthesis", {{z, z, 3, 1, true, true}, {z, 2 * l, 3, 2, true, false}}},
  };
}

ConvStack MakeStack(const StackSpec& spec) {
  ConvStack stack;
  for (size_t i = 0; i < spec.layers.size(); ++i) {
    const ConvLayerSpec& s = spec.layers[i];
    std::string prefix = std::string(spec.name) + "." + std::to_string(i) + ".";
    stack.layers.push_back(
        {s, Parameter{prefix + "weight", Tensor({s.kernel, s.in_channels, s.out_channels})},
         Parameter{prefix + "bias", Tensor({s.out_channels})}});
  }
  return stack;
}

// Sets w[k][i][o].
void SetTap(ConvLayer& layer, size_t k, size_t i, size_t o, double v) {
  const ConvLayerSpec& s = layer.spec;
  layer.weight.value[(k * s.in_channels + i) * s.out_channels + o] = v;
}

}  // namespace

Var ConvStack::Forward(Tape& tape, Var x) const {
  for (const ConvLayer& layer : layers) {
    Var w = tape.Param(layer.weight);
    Var b = tape.Param(layer.bias);
    x = layer.spec.transposed ? tensor::ConvTranspose1d(x, w, b, layer.spec.stride)
                              : tensor::Conv1d(x, w, b, layer.spec.stride);
    if (layer.spec.relu) x = tensor::Relu(x);
  }
  return x;
}

std::vector<Parameter*> CodecModel::Parameters() {
  std::vector<Parameter*> out;
  for (ConvStack* stack : {&analysis, &synthesis, &hyper_analysis, &hyper_synthesis}) {
    for (ConvLayer& layer : stack->layers) {
      out.push_back(&layer.weight);
      out.push_back(&layer.bias);
    }
  }
  out.push_back(&prior_mean);
  out.push_back(&prior_log_scale);
  return out;
}

std::vector<const Parameter*> CodecModel::Parameters() const {
  std::vector<const Parameter*> out;
  for (Parameter* p : const_cast<CodecModel*>(this)->Parameters()) out.push_back(p);
  return out;
}

size_t CodecModel::NumScalars() const {
  size_t n = 0;
  for (const Parameter* p : Parameters()) n += p->value.size();
  return n;
}

bool CodecModel::AllFinite() const {
  for (const Parameter* p : Parameters()) {
    if (!p->value.AllFinite()) return false;
  }
  return true;
}

CodecModel MakeZeroModel(const ModelConfig& config) {
  if (config.hidden == 0 || config.latent == 0 || config.hyper == 0) {
    throw Error(ErrorCode::kInvalidArgument, "model widths must be positive");
  }
  std::vector<StackSpec> topo = Topology(config);
  CodecModel m;
  m.config = config;
  m.analysis = MakeStack(topo[0]);
  m.synthesis = MakeStack(topo[1]);
  m.hyper_analysis = MakeStack(topo[2]);
  m.hyper_synthesis = MakeStack(topo[3]);
  m.prior_mean = Parameter{"prior.mean", Tensor({config.hyper})};
  m.prior_log_scale = Parameter{"prior.log_scale", Tensor({config.hyper})};
  return m;
}

CodecModel MakeRandomModel(uint64_t seed, const ModelConfig& config) {
  CodecModel m = MakeZeroModel(config);
  uint64_t index = 0;
  for (ConvStack* stack : {&m.analysis, &m.synthesis, &m.hyper_analysis, &m.hyper_synthesis}) {
    for (ConvLayer& layer : stack->layers) {
      const ConvLayerSpec& s = layer.spec;
      double fan_in = static_cast<double>(s.kernel * s.in_channels);
      double fan_out = static_cast<double>(s.kernel * s.out_channels);
      double bound = std::sqrt(6.0 / (fan_in + fan_out));
      Rng rng(DeriveSeed(seed, {index++}));
      for (double& w : layer.weight.value.values()) w = bound * (2.0 * rng.Uniform() - 1.0);
    }
  }
  // Start the reconstruction at mid-gray.
  m.synthesis.layers.back().bias.value.Fill(0.5);
  return m;
}

CodecModel MakeIdentityModel(double latent_scale, double sigma) {
  CodecModel m = MakeZeroModel();
  // Analysis: conv output l with tap k reads input 2l + k - 1 (stride 2, k5).
  ConvLayer& a0 = m.analysis.layers[0];
  ConvLayer& a1 = m.analysis.layers[1];
  ConvLayer& a2 = m.analysis.layers[2];
  for (size_t j = 0; j < 2; ++j) {
    for (size_t c = 0; c < 3; ++c) SetTap(a0, j + 1, c, j * 3 + c, latent_scale);
  }
  for (size_t j = 0; j < 2; ++j) {
    for (size_t ch = 0; ch < 6; ++ch) SetTap(a1, j + 1, ch, j * 6 + ch, 1.0);
  }
  for (size_t ch = 0; ch < 12; ++ch) SetTap(a2, 1, ch, ch, 1.0);

  // Synthesis: transposed output o gathers input l with tap o - s*l + pad.
  ConvLayer& s0 = m.synthesis.layers[0];
  ConvLayer& s1 = m.synthesis.layers[1];
  ConvLayer& s2 = m.synthesis.layers[2];
  for (size_t ch = 0; ch < 12; ++ch) SetTap(s0, 1, ch, ch, 1.0);
  for (size_t j = 0; j < 2; ++j) {
    for (size_t ch = 0; ch < 6; ++ch) SetTap(s1, j + 2, j * 6 + ch, ch, 1.0);
  }
  for (size_t j = 0; j < 2; ++j) {
    for (size_t c = 0; c < 3; ++c) SetTap(s2, j + 2, j * 3 + c, c, 1.0 / latent_scale);
  }

  // Hyper path: z = 0, mu = 0, sigma from the bias of the scale half.
  ConvLayer& h1 = m.hyper_synthesis.layers[1];
  for (size_t ch = 0; ch < m.config.latent; ++ch) {
    h1.bias.value[m.config.latent + ch] = std::log(sigma);
  }
  return m;
}

std::vector<NamedTensor> ModelToEntries(const CodecModel& model) {
  std::vector<NamedTensor> out;
  for (const Parameter* p : model.Parameters()) out.push_back({p->name, p->value});
  out.push_back({"meta.hidden", Tensor::Scalar(static_cast<double>(model.config.hidden))});
  out.push_back({"meta.latent", Tensor::Scalar(static_cast<double>(model.config.latent))});
  out.push_back({"meta.hyper", Tensor::Scalar(static_cast<double>(model.config.hyper))});
  out.push_back({"meta.lambda_id", Tensor::Scalar(model.lambda_id)});
  return out;
}

CodecModel ModelFromEntries(std::span<const NamedTensor> entries) {
  std::unordered_map<std::string, const Tensor*> by_name;
  for (const NamedTensor& e : entries) by_name[e.name] = &e.tensor;
  auto meta = [&](const std::string& name, double fallback, double max) {
    auto it = by_name.find(name);
    if (it == by_name.end()) return fallback;
    if (it->second->size() != 1) throw Error(ErrorCode::kCorruptStream, name + " is not a scalar");
    double v = (*it->second)[0];
    if (!(v >= 0 && v <= max) || v != std::floor(v)) {
      throw Error(ErrorCode::kCorruptStream, "invalid " + name + " in checkpoint");
    }
    return v;
  };
  ModelConfig config;
  config.hidden = static_cast<size_t>(meta("meta.hidden", 64, 4096));
  config.latent = static_cast<size_t>(meta("meta.latent", 32, 4096));
  config.hyper = static_cast<size_t>(meta("meta.hyper", 16, 4096));
  CodecModel m = MakeZeroModel(config);
  m.lambda_id = static_cast<uint8_t>(meta("meta.lambda_id", 0, 255));
  for (Parameter* p : m.Parameters()) {
    auto it = by_name.find(p->name);
    if (it == by_name.end()) {
      throw Error(ErrorCode::kMissingProperty, "checkpoint lacks parameter '" + p->name + "'");
    }
    if (it->second->shape() != p->value.shape()) {
      throw Error(ErrorCode::kShapeMismatch,
                  "parameter '" + p->name + "' has shape " +
                      tensor::ShapeString(it->second->shape()) + ", expected " +
                      tensor::ShapeString(p->value.shape()));
    }
    p->value = *it->second;
  }
  if (!m.AllFinite()) throw Error(ErrorCode::kNonFinite, "checkpoint holds non-finite values");
  return m;
}

Var Analyze(Tape& tape, const CodecModel& model, Var x) {
  if (x.shape().size() != 2 || x.shape()[1] != 3) {
    throw Error(ErrorCode::kShapeMismatch,
                "analysis input must be (N, 3), got " + tensor::ShapeString(x.shape()));
  }
  if (x.shape()[0] == 0 || x.shape()[0] % kPadMultiple != 0) {
    throw Error(ErrorCode::kShapeMismatch, "analysis input length " +
                                               std::to_string(x.shape()[0]) +
                                               " is not a positive multiple of 8");
  }
  return model.analysis.Forward(tape, x);
}

Var Synthesize(Tape& tape, const CodecModel& model, Var y_hat) {
  if (y_hat.shape().size() != 2 || y_hat.shape()[1] != model.config.latent) {
    throw Error(ErrorCode::kShapeMismatch, "latent must be (L, " +
                                               std::to_string(model.config.latent) + "), got " +
                                               tensor::ShapeString(y_hat.shape()));
  }
  return model.synthesis.Forward(tape, y_hat);
}

Var HyperAnalyze(Tape& tape, const CodecModel& model, Var y) {
  if (y.shape().size() != 2 || y.shape()[1] != model.config.latent || y.shape()[0] % 2 != 0) {
    throw Error(ErrorCode::kShapeMismatch, "latent must be (2M, " +
                                               std::to_string(model.config.latent) + "), got " +
                                               tensor::ShapeString(y.shape()));
  }
  return model.hyper_analysis.Forward(tape, y);
}

EntropyParamVars HyperSynthesize(Tape& tape, const CodecModel& model, Var z_hat) {
  const size_t c = model.config.latent;
  if (z_hat.shape().size() != 2 || z_hat.shape()[1] != model.config.hyper) {
    throw Error(ErrorCode::kShapeMismatch, "hyper-latent must be (M, " +
                                               std::to_string(model.config.hyper) + "), got " +
                                               tensor::ShapeString(z_hat.shape()));
  }
  Var out = model.hyper_synthesis.Forward(tape, z_hat);
  Var mu = tensor::Slice(out, 1, 0, c);
  Var raw = tensor::Slice(out, 1, c, 2 * c);
  // Clamp before exp so the exponent cannot overflow; the result is the same
  // as clamping exp(raw) to [1e-3, 1e3].
  Var sigma = tensor::Clamp(tensor::Exp(tensor::Clamp(raw, -700.0, 700.0)), 1e-3, 1e3);
  return {mu, sigma};
}

PriorVars HyperPrior(Tape& tape, const CodecModel& model) {
  Var mean = tape.Param(model.prior_mean);
  Var log_scale = tape.Param(model.prior_log_scale);
  Var sigma = tensor::Clamp(tensor::Exp(tensor::Clamp(log_scale, -700.0, 700.0)), 1e-3, 1e3);
  return {mean, sigma};
}

}  // namespace mgpc
