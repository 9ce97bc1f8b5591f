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

#ifndef MGPC_COMMON_RNG_H_
#define MGPC_COMMON_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace mgpc {

// SplitMix64 finalizer; used to derive independent stream seeds.
uint64_t MixSeed(uint64_t x);

// Derives a child seed from a parent seed and a path of integer labels, so
// e.g. (seed, epoch, item) always maps to the same stream.
uint64_t DeriveSeed(uint64_t seed, std::initializer_list<uint64_t> path);

// Seeded generator whose output sequence is fixed by the C++ standard
// (mt19937_64), with distribution code kept here rather than in <random>,
// whose distributions are implementation-defined.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }
  // Uniform in [0, 1) with 53 random bits.
  double Uniform();
  // Uniform integer in [0, n). n must be positive.
  uint64_t UniformInt(uint64_t n);
  bool Coin() { return (engine_() >> 63) != 0; }
  // Standard normal via Box-Muller.
  double Normal();

 private:
  std::mt19937_64 engine_;
};

}  // namespace mgpc

#endif  // MGPC_COMMON_RNG_H_
