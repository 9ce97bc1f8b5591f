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

#include "mgpc/tensor/special.h"

#include <cmath>
#include <numbers>

namespace mgpc::tensor {
namespace {

constexpr double kSeriesLimit = 2.5;
constexpr int kFractionTerms = 80;

// erf(x) = 2/sqrt(pi) exp(-x^2) sum_n 2^n x^(2n+1) / (2n+1)!!, all terms
// positive so there is no cancellation.
double ErfSeries(double x) {
  const double x2 = x * x;
  double term = x;
  double sum = x;
  for (int n = 1; n < 200; ++n) {
    term *= 2.0 * x2 / (2.0 * n + 1.0);
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return 2.0 / std::sqrt(std::numbers::pi) * std::exp(-x2) * sum;
}

// erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
// evaluated bottom-up with a fixed depth; x >= kSeriesLimit.
double ErfcFraction(double x) {
  double f = x;
  for (int n = kFractionTerms; n >= 1; --n) f = x + (0.5 * n) / f;
  return std::exp(-x * x) / std::sqrt(std::numbers::pi) / f;
}

}  // namespace

double Erf(double x) {
  if (std::isnan(x)) return x;
  const double a = std::fabs(x);
  double r;
  if (a < kSeriesLimit) {
    r = ErfSeries(a);
  } else {
    r = 1.0 - ErfcFraction(a);
  }
  return x < 0 ? -r : r;
}

double Erfc(double x) {
  if (std::isnan(x)) return x;
  if (x >= kSeriesLimit) return ErfcFraction(x);
  if (x <= -kSeriesLimit) return 2.0 - ErfcFraction(-x);
  return 1.0 - Erf(x);
}

double NormalCdf(double x) { return 0.5 * Erfc(-x / std::numbers::sqrt2); }

double NormalPdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double NormalInterval(double lo, double hi) {
  if (lo > 0.0) return NormalCdf(-lo) - NormalCdf(-hi);
  return NormalCdf(hi) - NormalCdf(lo);
}

}  // namespace mgpc::tensor
