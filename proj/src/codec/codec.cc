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

#include "mgpc/codec/codec.h"

#include <cmath>

#include "mgpc/codec/entropy.h"
#include "mgpc/codec/quantize.h"
#include "mgpc/codec/range_coder.h"
#include "mgpc/common/error.h"

namespace mgpc {

using tensor::Tape;
using tensor::Tensor;
using tensor::Var;

namespace {

constexpr double kMaxCodable = 1 << 30;

int32_t ToSymbol(double v) {
  if (!(std::fabs(v) < kMaxCodable)) {
    throw Error(ErrorCode::kNonFinite, "latent value outside the codable range");
  }
  return static_cast<int32_t>(v);
}

// Per-channel tables of the hyper-latent prior, centred on the rounded mean.
struct HyperTables {
  std::vector<double> anchor;
  std::vector<QuantizedCdf> tables;
};

HyperTables BuildHyperTables(const CodecModel& model) {
  Tape tape(false);
  PriorVars prior = HyperPrior(tape, model);
  HyperTables out;
  for (size_t c = 0; c < model.config.hyper; ++c) {
    const double mean = prior.mean.value()[c];
    const double anchor = std::round(mean);
    out.anchor.push_back(anchor);
    out.tables.push_back(GaussianCdf(mean - anchor, prior.sigma.value()[c]));
  }
  return out;
}

struct HyperOutputs {
  Tensor mu;
  Tensor sigma;
};

HyperOutputs RunHyperSynthesis(const CodecModel& model, const Tensor& z_hat) {
  Tape tape(false);
  EntropyParamVars p = HyperSynthesize(tape, model, tape.Constant(z_hat));
  return {p.mu.value(), p.sigma.value()};
}

Tensor RunSynthesis(const CodecModel& model, const Tensor& y_hat) {
  Tape tape(false);
  return Synthesize(tape, model, tape.Constant(y_hat)).value();
}

std::vector<Color> Unpermute(const std::vector<Color>& morton_colors,
                             const MortonPermutation& perm) {
  std::vector<Color> out(morton_colors.size());
  for (size_t j = 0; j < perm.order.size(); ++j) out[perm.order[j]] = morton_colors[j];
  return out;
}

size_t PaddedLength(size_t n) { return (n + kPadMultiple - 1) / kPadMultiple * kPadMultiple; }

}  // namespace

PreparedSignal PrepareSignal(const PointCloud& cloud) {
  ValidateCloud(cloud);
  PreparedSignal s;
  s.permutation = MortonOrder(cloud);
  std::vector<Color> ordered(cloud.size());
  for (size_t j = 0; j < cloud.size(); ++j) ordered[j] = cloud.colors[s.permutation.order[j]];
  s.x = EdgePadRows(NormalizeColors(ordered), kPadMultiple);
  s.num_points = cloud.size();
  return s;
}

PipelineResult RunPipeline(const PointCloud& cloud, const CodecModel& model) {
  PreparedSignal s = PrepareSignal(cloud);
  PipelineResult r;
  {
    Tape tape(false);
    Var y = Analyze(tape, model, tape.Constant(s.x));
    Var z = HyperAnalyze(tape, model, y);
    r.y = y.value();
    r.z_hat = z.value();
    for (double& v : r.z_hat.values()) v = std::round(v);
  }
  HyperOutputs h = RunHyperSynthesis(model, r.z_hat);
  r.mu = std::move(h.mu);
  r.sigma = std::move(h.sigma);
  r.y_hat = QuantizeCentered(r.y, r.mu);
  r.x_hat = RunSynthesis(model, r.y_hat);
  r.colors = Unpermute(ScaleRoundRows(r.x_hat, s.num_points), s.permutation);

  r.latent_bits = InformationBits(r.y_hat, r.mu, r.sigma);
  Tape tape(false);
  PriorVars prior = HyperPrior(tape, model);
  const size_t rows = r.z_hat.dim(0);
  for (size_t i = 0; i < rows; ++i) {
    for (size_t c = 0; c < model.config.hyper; ++c) {
      r.hyper_bits -= std::log2(DiscretizedGaussian(r.z_hat.at(i, c), prior.mean.value()[c],
                                                    prior.sigma.value()[c]));
    }
  }
  return r;
}

Bitstream Compress(const PointCloud& cloud, const CodecModel& model) {
  PreparedSignal s = PrepareSignal(cloud);
  if (s.num_points > UINT32_MAX) throw Error(ErrorCode::kInvalidArgument, "cloud too large");
  Tensor y;
  Tensor z_hat;
  {
    Tape tape(false);
    Var yv = Analyze(tape, model, tape.Constant(s.x));
    y = yv.value();
    z_hat = HyperAnalyze(tape, model, yv).value();
    for (double& v : z_hat.values()) v = std::round(v);
  }

  Bitstream out;
  out.header.num_points = static_cast<uint32_t>(s.num_points);
  out.header.original_length = static_cast<uint32_t>(s.num_points);
  out.header.lambda_id = model.lambda_id;

  HyperTables hyper = BuildHyperTables(model);
  RangeEncoder hyper_enc;
  for (size_t i = 0; i < z_hat.dim(0); ++i) {
    for (size_t c = 0; c < model.config.hyper; ++c) {
      EncodeValue(hyper_enc, hyper.tables[c], ToSymbol(z_hat.at(i, c) - hyper.anchor[c]));
    }
  }
  out.hyper_payload = hyper_enc.Finish();
  out.header.hyper_payload_len = static_cast<uint32_t>(out.hyper_payload.size());

  HyperOutputs h = RunHyperSynthesis(model, z_hat);
  ScaleTableSet scales;
  RangeEncoder main_enc;
  for (size_t i = 0; i < y.size(); ++i) {
    EncodeValue(main_enc, scales.ForSigma(h.sigma[i]), ToSymbol(std::round(y[i] - h.mu[i])));
  }
  out.main_payload = main_enc.Finish();
  return out;
}

PointCloud Decompress(const Bitstream& stream, const PointCloud& geometry,
                      const CodecModel& model) {
  const BitstreamHeader& hdr = stream.header;
  if (hdr.num_points == 0 || hdr.original_length != hdr.num_points) {
    throw Error(ErrorCode::kCorruptStream, "inconsistent point counts in header");
  }
  if (hdr.hyper_payload_len != stream.hyper_payload.size()) {
    throw Error(ErrorCode::kCorruptStream, "header hyper length disagrees with payload");
  }
  if (geometry.size() != hdr.num_points) {
    throw Error(ErrorCode::kGeometryMismatch,
                "geometry has " + std::to_string(geometry.size()) + " points, stream has " +
                    std::to_string(hdr.num_points));
  }
  PointCloud out;
  out.positions = geometry.positions;
  out.resolution_bits = geometry.resolution_bits;
  out.colors.assign(geometry.size(), Color{0, 0, 0});
  ValidateCloud(out);
  MortonPermutation perm = MortonOrder(out);

  const size_t padded = PaddedLength(hdr.num_points);
  const size_t latent_rows = padded / kLatentStride;
  const size_t hyper_rows = latent_rows / 2;

  HyperTables hyper = BuildHyperTables(model);
  RangeDecoder hyper_dec(stream.hyper_payload);
  Tensor z_hat({hyper_rows, model.config.hyper});
  for (size_t i = 0; i < hyper_rows; ++i) {
    for (size_t c = 0; c < model.config.hyper; ++c) {
      z_hat.at(i, c) = DecodeValue(hyper_dec, hyper.tables[c]) + hyper.anchor[c];
    }
  }

  HyperOutputs h = RunHyperSynthesis(model, z_hat);
  ScaleTableSet scales;
  RangeDecoder main_dec(stream.main_payload);
  Tensor y_hat({latent_rows, model.config.latent});
  for (size_t i = 0; i < y_hat.size(); ++i) {
    y_hat[i] = DecodeValue(main_dec, scales.ForSigma(h.sigma[i])) + h.mu[i];
  }

  Tensor x_hat = RunSynthesis(model, y_hat);
  out.colors = Unpermute(ScaleRoundRows(x_hat, hdr.num_points), perm);
  return out;
}

}  // namespace mgpc
