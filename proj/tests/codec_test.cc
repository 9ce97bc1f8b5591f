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

#include <cmath>
#include <functional>
#include <optional>
#include <set>

#include <gtest/gtest.h>

#include "mgpc/codec/bitstream.h"
#include "mgpc/codec/codec.h"
#include "mgpc/codec/entropy.h"
#include "mgpc/codec/model.h"
#include "mgpc/codec/quantize.h"
#include "mgpc/codec/range_coder.h"
#include "mgpc/common/error.h"
#include "mgpc/common/rng.h"
#include "mgpc/pointcloud/toy_data.h"
#include "mgpc/tensor/ops.h"

namespace mgpc {
namespace {

using tensor::Tape;
using tensor::Tensor;
using tensor::Var;

std::optional<ErrorCode> CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

PointCloud RandomCloud(size_t n, uint64_t seed) {
  Rng rng(seed);
  std::set<Position> seen;
  PointCloud c;
  c.resolution_bits = 8;
  while (c.size() < n) {
    Position p{static_cast<uint32_t>(rng.UniformInt(256)), static_cast<uint32_t>(rng.UniformInt(256)),
               static_cast<uint32_t>(rng.UniformInt(256))};
    if (!seen.insert(p).second) continue;
    c.positions.push_back(p);
    c.colors.push_back({static_cast<uint8_t>(rng.UniformInt(256)),
                        static_cast<uint8_t>(rng.UniformInt(256)),
                        static_cast<uint8_t>(rng.UniformInt(256))});
  }
  return c;
}

// Discretized Gaussian mass through libm, independent of the library's erf.
double OracleMass(double d, double sigma) {
  const double s = sigma * std::sqrt(2.0);
  const double a = std::fabs(d);
  return std::max(0.5 * (std::erfc((a - 0.5) / s) - std::erfc((a + 0.5) / s)), 1e-9);
}

TEST(Normalize, Examples) {
  Tensor x = NormalizeColors(std::vector<Color>{{255, 255, 255}, {0, 0, 0}, {128, 1, 2}});
  EXPECT_EQ(x.shape(), (tensor::Shape{3, 3}));
  for (size_t c = 0; c < 3; ++c) {
    EXPECT_EQ(x.at(0, c), 1.0);
    EXPECT_EQ(x.at(1, c), 0.0);
  }
  EXPECT_EQ(x.at(2, 0), 128.0 / 255.0);
  EXPECT_NEAR(x.at(2, 0), 0.50196, 1e-5);
}

TEST(Pad, EdgeReplicates) {
  Tensor x({3, 3}, {1, 2, 3, 4, 5, 6, 7, 8, 9});
  Tensor p = EdgePadRows(x, 8);
  ASSERT_EQ(p.shape(), (tensor::Shape{8, 3}));
  for (size_t r = 3; r < 8; ++r) {
    for (size_t c = 0; c < 3; ++c) EXPECT_EQ(p.at(r, c), x.at(2, c));
  }
  EXPECT_EQ(EdgePadRows(p, 8), p);
}

TEST(QuantizeCentered, Examples) {
  EXPECT_NEAR(QuantizeCentered(2.3, 0.1), 2.1, 1e-12);
  EXPECT_EQ(QuantizeCentered(QuantizeCentered(2.3, 0.1), 0.1), QuantizeCentered(2.3, 0.1));
  EXPECT_EQ(QuantizeCentered(5.0, 0.0), 5.0);
  EXPECT_EQ(QuantizeCentered(0.5, 0.0), 1.0);
  EXPECT_EQ(QuantizeCentered(-0.5, 0.0), -1.0);
}

TEST(QuantizeCentered, IdempotentAndIntegralOffsets) {
  Rng rng(1);
  for (int i = 0; i < 100000; ++i) {
    const double y = (rng.Uniform() - 0.5) * 200.0;
    const double mu = (rng.Uniform() - 0.5) * 20.0;
    const double q = QuantizeCentered(y, mu);
    ASSERT_EQ(QuantizeCentered(q, mu), q) << y << " " << mu;
    ASSERT_NEAR(q - mu, std::round(q - mu), 1e-9);
  }
}

TEST(ScaleRound, Examples) {
  EXPECT_EQ(ScaleRound(1.2), 255);
  EXPECT_EQ(ScaleRound(-0.3), 0);
  for (int v = 0; v <= 255; ++v) {
    EXPECT_EQ(ScaleRound(v / 255.0), v);
    EXPECT_EQ(ScaleRound(v / 255.0 + 0.4 / 255.0), v);
    EXPECT_EQ(ScaleRound(v / 255.0 - 0.4 / 255.0), v);
    if (v < 255) {
      EXPECT_EQ(ScaleRound(v / 255.0 + 0.6 / 255.0), v + 1);
    }
    if (v > 0) {
      EXPECT_EQ(ScaleRound(v / 255.0 - 0.6 / 255.0), v - 1);
    }
  }
  EXPECT_EQ(CodeOf([] { ScaleRound(std::nan("")); }), ErrorCode::kNonFinite);
  EXPECT_EQ(CodeOf([] { ScaleRound(INFINITY); }), ErrorCode::kNonFinite);
}

TEST(Likelihood, Examples) {
  EXPECT_NEAR(DiscretizedGaussian(0.0, 0.0, 1.0), 0.38292, 1e-5);
  EXPECT_GT(DiscretizedGaussian(0.0, 0.0, 1e-3), 1.0 - 1e-12);
  EXPECT_EQ(DiscretizedGaussian(400.0, 0.0, 1.0), kLikelihoodFloor);
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    const double d = (rng.Uniform() - 0.5) * 20.0;
    const double mu = rng.Uniform();
    const double sigma = 0.01 + 5.0 * rng.Uniform();
    EXPECT_EQ(DiscretizedGaussian(d, 0.0, sigma), DiscretizedGaussian(-d, 0.0, sigma));
    EXPECT_NEAR(DiscretizedGaussian(mu + d, mu, sigma), OracleMass((mu + d) - mu, sigma), 1e-13);
  }
}

TEST(Likelihood, TapeMatchesTensorVersion) {
  Rng rng(3);
  Tensor v({40, 4}), mu({40, 4}), sigma({40, 4});
  for (size_t i = 0; i < v.size(); ++i) {
    v[i] = std::round(10 * (rng.Uniform() - 0.5)) + rng.Uniform();
    mu[i] = rng.Uniform();
    sigma[i] = 0.01 + 3 * rng.Uniform();
  }
  Tape t(false);
  Var p = LikelihoodVar(t.Constant(v), t.Constant(mu), t.Constant(sigma));
  EXPECT_EQ(p.value(), Likelihood(v, mu, sigma));
  EXPECT_EQ(InformationBitsVar(t.Constant(v), t.Constant(mu), t.Constant(sigma)).value()[0],
            InformationBits(v, mu, sigma));
}

TEST(QuantizedCdf, TablesAreValid) {
  for (double sigma : {1e-3, 0.3, 1.0, 17.0, 1e3}) {
    for (double offset : {-0.5, 0.0, 0.25}) {
      QuantizedCdf t = GaussianCdf(offset, sigma);
      ASSERT_EQ(t.cdf.front(), 0u);
      ASSERT_EQ(t.cdf.back(), kCdfTotal);
      for (size_t i = 0; i + 1 < t.cdf.size(); ++i) ASSERT_LT(t.cdf[i], t.cdf[i + 1]);
      EXPECT_TRUE(t.has_escape);
    }
  }
  QuantizedCdf u = UniformCdf(0, 255);
  EXPECT_EQ(u.num_symbols(), 256u);
  for (size_t i = 0; i < 256; ++i) EXPECT_EQ(u.Probability(i), 1.0 / 256);
}

TEST(RangeCoder, EmptyInput) {
  std::vector<uint8_t> bytes = RangeEncode({}, {});
  EXPECT_TRUE(bytes.empty());
  EXPECT_TRUE(RangeDecode(bytes, {}).empty());
}

TEST(RangeCoder, UniformBytesNearEntropy) {
  Rng rng(4);
  QuantizedCdf u = UniformCdf(0, 255);
  std::vector<int32_t> symbols(1000);
  for (int32_t& s : symbols) s = static_cast<int32_t>(rng.UniformInt(256));
  std::vector<const QuantizedCdf*> tables(1000, &u);
  std::vector<uint8_t> bytes = RangeEncode(symbols, tables);
  EXPECT_EQ(RangeDecode(bytes, tables), symbols);
  // 8 bits per symbol exactly; allow 0.5% plus the coder's flush bytes.
  EXPECT_LE(bytes.size(), 1005u + 8u);
  EXPECT_GE(bytes.size(), 1000u);
}

TEST(RangeCoder, GaussianRoundTripsAndSize) {
  Rng rng(5);
  std::vector<QuantizedCdf> bank;
  std::vector<double> sigmas;
  for (int i = 0; i < 64; ++i) {
    sigmas.push_back(std::exp(-3.0 + 8.0 * i / 63.0));
    bank.push_back(GaussianCdf(0.0, sigmas.back()));
  }
  for (int trial = 0; trial < 100; ++trial) {
    const size_t n = 1 + rng.UniformInt(3000);
    std::vector<int32_t> symbols;
    std::vector<const QuantizedCdf*> tables;
    double analytic = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const size_t k = rng.UniformInt(bank.size());
      const QuantizedCdf& t = bank[k];
      const int32_t v = static_cast<int32_t>(std::round(rng.Normal() * sigmas[k]));
      const int32_t clamped = std::clamp(v, t.min_symbol, t.max_value());
      symbols.push_back(clamped);
      tables.push_back(&t);
      analytic -= std::log2(t.Probability(clamped - t.min_symbol));
    }
    std::vector<uint8_t> bytes = RangeEncode(symbols, tables);
    ASSERT_EQ(RangeDecode(bytes, tables), symbols) << "trial " << trial;
    EXPECT_LE(bytes.size(), analytic / 8.0 * 1.01 + 8.0) << "trial " << trial;
  }
}

TEST(RangeCoder, EscapedValuesRoundTrip) {
  QuantizedCdf t = GaussianCdf(0.0, 1.0);
  std::vector<int32_t> values = {0, 1, -1, 500, -100000, 7, 2147483000, -2147483000, 3};
  RangeEncoder enc;
  for (int32_t v : values) EncodeValue(enc, t, v);
  std::vector<uint8_t> bytes = enc.Finish();
  RangeDecoder dec(bytes);
  for (int32_t v : values) EXPECT_EQ(DecodeValue(dec, t), v);
}

TEST(RangeCoder, Errors) {
  QuantizedCdf u = UniformCdf(0, 3);
  std::vector<int32_t> bad = {4};
  std::vector<const QuantizedCdf*> tables = {&u};
  EXPECT_EQ(CodeOf([&] { RangeEncode(bad, tables); }), ErrorCode::kSymbolOutOfSupport);
  std::vector<int32_t> ok(50, 2);
  std::vector<const QuantizedCdf*> many(50, &u);
  std::vector<uint8_t> bytes = RangeEncode(ok, many);
  bytes.resize(bytes.size() / 2);
  EXPECT_EQ(CodeOf([&] { RangeDecode(bytes, many); }), ErrorCode::kTruncatedStream);
}

TEST(Model, ShapesThroughTheStack) {
  CodecModel m = MakeRandomModel(7);
  Tape t(false);
  Var y = Analyze(t, m, t.Constant(Tensor({8, 3}, 0.5)));
  EXPECT_EQ(y.shape(), (tensor::Shape{2, 32}));
  Var y64 = Analyze(t, m, t.Constant(Tensor({64, 3}, 0.5)));
  EXPECT_EQ(y64.shape(), (tensor::Shape{16, 32}));
  Var z = HyperAnalyze(t, m, y64);
  EXPECT_EQ(z.shape(), (tensor::Shape{8, 16}));
  EntropyParamVars p = HyperSynthesize(t, m, tensor::SteRound(z));
  EXPECT_EQ(p.mu.shape(), (tensor::Shape{16, 32}));
  EXPECT_EQ(p.sigma.shape(), (tensor::Shape{16, 32}));
  EXPECT_EQ(Synthesize(t, m, y).shape(), (tensor::Shape{8, 3}));
  EXPECT_EQ(CodeOf([&] { Analyze(t, m, t.Constant(Tensor({12, 3}))); }),
            ErrorCode::kShapeMismatch);
}

TEST(Model, ZeroAndDeterministic) {
  CodecModel zero = MakeZeroModel();
  Tape t(false);
  Var y = Analyze(t, zero, t.Constant(Tensor({16, 3})));
  for (double v : y.value().values()) EXPECT_EQ(v, 0.0);
  for (double v : Synthesize(t, zero, y).value().values()) EXPECT_EQ(v, 0.0);

  CodecModel a = MakeRandomModel(3), b = MakeRandomModel(3);
  Rng rng(8);
  Tensor x({32, 3});
  for (double& v : x.values()) v = rng.Uniform();
  EXPECT_EQ(Analyze(t, a, t.Constant(x)).value(), Analyze(t, b, t.Constant(x)).value());
}

TEST(Model, SigmaPositiveForRandomModels) {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    CodecModel m = MakeRandomModel(seed);
    PipelineResult r = RunPipeline(RandomCloud(200, seed), m);
    for (double s : r.sigma.values()) {
      ASSERT_GE(s, kSigmaMin);
      ASSERT_LE(s, kSigmaMax);
    }
    for (double z : r.z_hat.values()) ASSERT_EQ(z, std::round(z));
    for (size_t i = 0; i < r.y_hat.size(); ++i) {
      ASSERT_NEAR(r.y_hat[i] - r.mu[i], std::round(r.y_hat[i] - r.mu[i]), 1e-9);
    }
  }
}

TEST(Model, EntriesRoundTrip) {
  CodecModel m = MakeRandomModel(9);
  m.lambda_id = 3;
  CodecModel back = ModelFromEntries(ModelToEntries(m));
  EXPECT_EQ(ModelToEntries(back), ModelToEntries(m));
  EXPECT_EQ(back.lambda_id, 3);
}

TEST(Codec, DeterministicAndGeometryPreserving) {
  PointCloud c = RandomCloud(500, 10);
  CodecModel m = MakeRandomModel(11);
  Bitstream a = Compress(c, m), b = Compress(c, m);
  EXPECT_EQ(a.Serialize(), b.Serialize());
  PointCloud d = Decompress(a, c, m);
  EXPECT_EQ(d.positions, c.positions);
  EXPECT_EQ(d.size(), c.size());
}

TEST(Codec, MatchesPipelineExactly) {
  for (uint64_t seed : {12u, 13u, 14u}) {
    PointCloud c = RandomCloud(100, seed);
    CodecModel m = MakeRandomModel(seed);
    PipelineResult r = RunPipeline(c, m);
    Bitstream s = Bitstream::Parse(Compress(c, m).Serialize());
    EXPECT_EQ(Decompress(s, c, m).colors, r.colors);
  }
}

TEST(Codec, RateMatchesAnalyticOracle) {
  PointCloud c = MakeToyCloud(5000, 15);
  CodecModel m = MakeRandomModel(16);
  PipelineResult r = RunPipeline(c, m);
  double bits = 0.0;
  for (size_t i = 0; i < r.y_hat.size(); ++i) {
    bits -= std::log2(OracleMass(r.y_hat[i] - r.mu[i], r.sigma[i]));
  }
  Tape t(false);
  PriorVars prior = HyperPrior(t, m);
  const size_t z = m.config.hyper;
  for (size_t i = 0; i < r.z_hat.size(); ++i) {
    bits -= std::log2(OracleMass(r.z_hat[i] - prior.mean.value()[i % z], prior.sigma.value()[i % z]));
  }
  Bitstream s = Compress(c, m);
  const double payload_bits = 8.0 * (s.hyper_payload.size() + s.main_payload.size());
  EXPECT_LE(std::fabs(payload_bits - bits), 0.02 * bits + 64.0) << payload_bits << " vs " << bits;
}

TEST(Codec, IdentityModelIsLossless) {
  PointCloud c = MakeToyCloud(3000, 17);
  CodecModel m = MakeIdentityModel();
  EXPECT_EQ(Decompress(Compress(c, m), c, m).colors, c.colors);
}

TEST(Codec, TruncatedPayloadFails) {
  PointCloud c = RandomCloud(300, 18);
  CodecModel m = MakeRandomModel(19);
  std::vector<uint8_t> bytes = Compress(c, m).Serialize();
  for (size_t cut : {1u, 5u, 40u}) {
    std::vector<uint8_t> shorter(bytes.begin(), bytes.end() - cut);
    EXPECT_EQ(CodeOf([&] { Decompress(Bitstream::Parse(shorter), c, m); }),
              ErrorCode::kTruncatedStream)
        << cut;
  }
}

TEST(Codec, GeometryMismatch) {
  PointCloud c = RandomCloud(64, 20);
  CodecModel m = MakeRandomModel(21);
  Bitstream s = Compress(c, m);
  PointCloud other = RandomCloud(65, 20);
  EXPECT_EQ(CodeOf([&] { Decompress(s, other, m); }), ErrorCode::kGeometryMismatch);
}

TEST(Bitstream, HeaderLayoutAndErrors) {
  Bitstream s;
  s.header = {128, 128, 2, 3};
  s.hyper_payload = {1, 2, 3};
  s.main_payload = {9};
  std::vector<uint8_t> b = s.Serialize();
  ASSERT_EQ(b.size(), kBitstreamHeaderBytes + 4);
  EXPECT_EQ(std::string(b.begin(), b.begin() + 4), "MGPC");
  EXPECT_EQ(b[4], 1);
  EXPECT_EQ(b[5], 128);  // little-endian num_points
  EXPECT_EQ(Bitstream::Parse(b), s);

  std::vector<uint8_t> bad_magic = b;
  bad_magic[0] = 'X';
  EXPECT_EQ(CodeOf([&] { Bitstream::Parse(bad_magic); }), ErrorCode::kCorruptStream);
  std::vector<uint8_t> bad_version = b;
  bad_version[4] = 2;
  EXPECT_EQ(CodeOf([&] { Bitstream::Parse(bad_version); }), ErrorCode::kVersionMismatch);
  std::vector<uint8_t> short_header(b.begin(), b.begin() + 10);
  EXPECT_EQ(CodeOf([&] { Bitstream::Parse(short_header); }), ErrorCode::kTruncatedStream);
  std::vector<uint8_t> short_hyper(b.begin(), b.begin() + kBitstreamHeaderBytes + 2);
  EXPECT_EQ(CodeOf([&] { Bitstream::Parse(short_hyper); }), ErrorCode::kTruncatedStream);
}

TEST(Bitstream, BitsPerPoint) {
  EXPECT_DOUBLE_EQ(BitsPerPoint(1000, 800000), 0.01);
  EXPECT_DOUBLE_EQ(BitsPerPoint(16, 128), 1.0);
  EXPECT_DOUBLE_EQ(BitsPerPoint(kBitstreamHeaderBytes, 144), 1.0);
  EXPECT_EQ(CodeOf([] { BitsPerPoint(10, 0); }), ErrorCode::kInvalidArgument);
}

TEST(Bitstream, LambdaIds) {
  EXPECT_EQ(LambdaIdFor(1000), 1);
  EXPECT_EQ(LambdaIdFor(6000), 4);
  EXPECT_EQ(LambdaIdFor(1234), kLambdaCustom);
  EXPECT_EQ(LambdaFor(2), 2000);
  EXPECT_EQ(LambdaFor(kLambdaControl), 0);
}

}  // namespace
}  // namespace mgpc
