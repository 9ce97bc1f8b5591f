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

#ifndef MGPC_CODEC_ENTROPY_H_
#define MGPC_CODEC_ENTROPY_H_

#include <cstdint>
#include <memory>
#include <vector>

#include "mgpc/tensor/tape.h"

namespace mgpc {

inline constexpr double kLikelihoodFloor = 1e-9;
inline constexpr double kSigmaMin = 1e-3;
inline constexpr double kSigmaMax = 1e3;
inline constexpr int kCdfPrecisionBits = 16;
inline constexpr uint32_t kCdfTotal = 1u << kCdfPrecisionBits;
// Largest |symbol| a Gaussian table covers directly; beyond it an escape is
// coded followed by raw Exp-Golomb bits.
inline constexpr int32_t kMaxTableBound = 4096;

// Discretized Gaussian mass of the unit bin around `value`:
// Phi((0.5 - |d|) / sigma) - Phi((-0.5 - |d|) / sigma), d = value - mu,
// floored at kLikelihoodFloor.
double DiscretizedGaussian(double value, double mu, double sigma);

// Elementwise likelihood of equal-shape tensors.
tensor::Tensor Likelihood(const tensor::Tensor& values, const tensor::Tensor& mu,
                          const tensor::Tensor& sigma);
// Sum of -log2 P over all elements.
double InformationBits(const tensor::Tensor& values, const tensor::Tensor& mu,
                       const tensor::Tensor& sigma);

// Differentiable counterpart, bit-identical in the forward direction.
tensor::Var LikelihoodVar(tensor::Var values, tensor::Var mu, tensor::Var sigma);
// Sum of -log2 P as a scalar Var.
tensor::Var InformationBitsVar(tensor::Var values, tensor::Var mu, tensor::Var sigma);

// A 16-bit cumulative frequency table over the integers
// [min_symbol, min_symbol + num_symbols()). When has_escape is set the last
// entry is the escape symbol rather than a value.
struct QuantizedCdf {
  int32_t min_symbol = 0;
  std::vector<uint32_t> cdf;  // cdf[0] == 0, cdf.back() == kCdfTotal, strictly increasing
  bool has_escape = false;

  size_t num_symbols() const { return cdf.size() - 1; }
  int32_t max_value() const {
    return min_symbol + static_cast<int32_t>(num_symbols()) - (has_escape ? 2 : 1);
  }
  double Probability(size_t index) const {
    return static_cast<double>(cdf[index + 1] - cdf[index]) / kCdfTotal;
  }
};

// Quantizes a probability mass function: every symbol gets at least one
// count plus its rounded share of the rest.
QuantizedCdf QuantizePmf(const std::vector<double>& pmf, int32_t min_symbol, bool has_escape);

// Integer values v ~ N(offset, sigma) binned on unit intervals; covers
// |v| <= bound(sigma, offset) plus an escape symbol.
QuantizedCdf GaussianCdf(double offset, double sigma);

// Equiprobable table over [lo, hi], no escape.
QuantizedCdf UniformCdf(int32_t lo, int32_t hi);

// Log-spaced grid of sigma levels in [kSigmaMin, kSigmaMax] with zero-mean
// Gaussian tables built on first use. Not thread-safe; use one per call.
class ScaleTableSet {
 public:
  static constexpr size_t kLevels = 1025;

  static size_t LevelOf(double sigma);
  static double SigmaAt(size_t level);

  const QuantizedCdf& ForSigma(double sigma) { return ForLevel(LevelOf(sigma)); }
  const QuantizedCdf& ForLevel(size_t level);

 private:
  std::vector<std::unique_ptr<QuantizedCdf>> tables_ =
      std::vector<std::unique_ptr<QuantizedCdf>>(kLevels);
};

}  // namespace mgpc

#endif  // MGPC_CODEC_ENTROPY_H_
