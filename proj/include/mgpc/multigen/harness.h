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

#ifndef MGPC_MULTIGEN_HARNESS_H_
#define MGPC_MULTIGEN_HARNESS_H_

#include <functional>
#include <string>

#include "mgpc/codec/codec.h"
#include "mgpc/multigen/metrics.h"

namespace mgpc {

struct MultigenLabels {
  std::string sequence;
  std::string method;
  std::string rate_point;
};

// x_0 = cloud; x_k = decompress(compress(x_{k-1})) for k = 1..generations,
// each stream serialized and parsed back as it would be from disk. PSNR-Y is
// measured against x_0. Codec errors are rethrown with the generation
// number prepended. `on_generation` sees every x_k.
GenerationTrace RunMultigen(const PointCloud& cloud, const Codec& codec, int generations,
                            const MultigenLabels& labels = {},
                            const std::function<void(int, const PointCloud&)>& on_generation = {});

}  // namespace mgpc

#endif  // MGPC_MULTIGEN_HARNESS_H_
