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

#include "mgpc/codec/entropy.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mgpc/common/error.h"
#include "mgpc/tensor/ops.h"
#include "mgpc/tensor/special.h"

namespace mgpc {

using tensor::Tensor;
using tensor::Var;

namespace {

const double kInvLn2 = 1.0 / std::numbers::ln2;

void CheckSameShape(const Tensor& a, const Tensor& b, const Tensor& c) {
  if (a.shape() != b.shape() || a.shape() != c.shape()) {
    throw Error(ErrorCode::kShapeMismatch,
                "likelihood operands " + tensor::ShapeString(a.shape()) + ", " +
                    tensor::ShapeString(b.shape()) + ", " + tensor::ShapeString(c.shape()));
  }
}

}  // namespace

double DiscretizedGaussian(double value, double mu, double sigma) {
  const double a = std::fabs(value - mu);
  const double upper = tensor::NormalCdf((-a + 0.5) / sigma);
  const double lower = tensor::NormalCdf((-a + -0.5) / sigma);
  return std::max(upper - lower, kLikelihoodFloor);
}

Tensor Likelihood(const Tensor& values, const Tensor& mu, const Tensor& sigma) {
  CheckSameShape(values, mu, sigma);
  Tensor out(values.shape());
  for (size_t i = 0; i < out.size(); ++i) out[i] = DiscretizedGaussian(values[i], mu[i], sigma[i]);
  return out;
}

double InformationBits(const Tensor& values, const Tensor& mu, const Tensor& sigma) {
  Tensor p = Likelihood(values, mu, sigma);
  double bits = 0.0;
  for (double v : p.values()) bits += std::log(v) * -kInvLn2;
  return bits;
}

Var LikelihoodVar(Var values, Var mu, Var sigma) {
  using namespace tensor;
  Var neg_a = MulScalar(Abs(Sub(values, mu)), -1.0);
  Var upper = GaussianCdf(Div(AddScalar(neg_a, 0.5), sigma));
  Var lower = GaussianCdf(Div(AddScalar(neg_a, -0.5), sigma));
  return Clamp(Sub(upper, lower), kLikelihoodFloor, HUGE_VAL);
}

Var InformationBitsVar(Var values, Var mu, Var sigma) {
  using namespace tensor;
  return Sum(MulScalar(Log(LikelihoodVar(values, mu, sigma)), -kInvLn2));
}

QuantizedCdf QuantizePmf(const std::vector<double>& pmf, int32_t min_symbol, bool has_escape) {
  const size_t n = pmf.size();
  if (n == 0 || n > kCdfTotal) {
    throw Error(ErrorCode::kInvalidArgument, "table size " + std::to_string(n) + " out of range");
  }
  double total = 0.0;
  for (double p : pmf) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw Error(ErrorCode::kNonFinite, "invalid probability in table");
    }
    total += p;
  }
  const double spare = static_cast<double>(kCdfTotal - n);
  std::vector<uint32_t> freq(n);
  int64_t used = 0;
  size_t best = 0;
  for (size_t i = 0; i < n; ++i) {
    double share = total > 0.0 ? pmf[i] / total : 0.0;
    freq[i] = 1 + static_cast<uint32_t>(std::min(std::round(share * spare), spare));
    used += freq[i];
    if (pmf[i] > pmf[best]) best = i;
  }
  // Rounding leaves a small surplus or deficit; the most probable symbol
  // absorbs it.
  const int64_t adjusted = static_cast<int64_t>(freq[best]) + (int64_t{kCdfTotal} - used);
  if (adjusted < 1) throw Error(ErrorCode::kInvalidArgument, "table cannot be quantized");
  freq[best] = static_cast<uint32_t>(adjusted);

  QuantizedCdf out;
  out.min_symbol = min_symbol;
  out.has_escape = has_escape;
  out.cdf.resize(n + 1);
  out.cdf[0] = 0;
  for (size_t i = 0; i < n; ++i) out.cdf[i + 1] = out.cdf[i] + freq[i];
  return out;
}

QuantizedCdf GaussianCdf(double offset, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma) || !std::isfinite(offset)) {
    throw Error(ErrorCode::kInvalidArgument, "Gaussian table needs finite offset and sigma > 0");
  }
  const double reach = std::ceil(7.0 * sigma + std::fabs(offset));
  const int32_t bound =
      static_cast<int32_t>(std::clamp(reach, 1.0, static_cast<double>(kMaxTableBound)));
  std::vector<double> pmf;
  pmf.reserve(2 * bound + 2);
  for (int32_t v = -bound; v <= bound; ++v) {
    pmf.push_back(tensor::NormalInterval((v - 0.5 - offset) / sigma, (v + 0.5 - offset) / sigma));
  }
  const double left = tensor::NormalCdf((-bound - 0.5 - offset) / sigma);
  const double right = tensor::NormalCdf((-bound - 0.5 + offset) / sigma);
  pmf.push_back(left + right);
  return QuantizePmf(pmf, -bound, true);
}

QuantizedCdf UniformCdf(int32_t lo, int32_t hi) {
  if (hi < lo) throw Error(ErrorCode::kInvalidArgument, "empty uniform table");
  std::vector<double> pmf(static_cast<size_t>(hi - lo) + 1, 1.0);
  return QuantizePmf(pmf, lo, false);
}

size_t ScaleTableSet::LevelOf(double sigma) {
  const double clamped = std::clamp(sigma, kSigmaMin, kSigmaMax);
  const double pos = (std::log10(clamped) + 3.0) * ((kLevels - 1) / 6.0);
  return static_cast<size_t>(std::clamp(std::round(pos), 0.0, static_cast<double>(kLevels - 1)));
}

double ScaleTableSet::SigmaAt(size_t level) {
  return std::pow(10.0, -3.0 + 6.0 * static_cast<double>(level) / (kLevels - 1));
}

const QuantizedCdf& ScaleTableSet::ForLevel(size_t level) {
  if (level >= kLevels) throw Error(ErrorCode::kInvalidArgument, "scale level out of range");
  if (!tables_[level]) tables_[level] = std::make_unique<QuantizedCdf>(GaussianCdf(0.0, SigmaAt(level)));
  return *tables_[level];
}

}  // namespace mgpc
