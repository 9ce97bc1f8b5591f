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

#ifndef MGPC_CODEC_CODEC_H_
#define MGPC_CODEC_CODEC_H_

#include <string>
#include <vector>

#include "mgpc/codec/bitstream.h"
#include "mgpc/codec/model.h"
#include "mgpc/pointcloud/point_cloud.h"
#include "mgpc/pointcloud/spatial.h"

namespace mgpc {

// The attribute signal the transforms see: colors in Morton order,
// normalized and edge-padded to a multiple of 8 rows.
struct PreparedSignal {
  MortonPermutation permutation;
  tensor::Tensor x;  // (N_pad, 3)
  size_t num_points = 0;
};
PreparedSignal PrepareSignal(const PointCloud& cloud);

// Every intermediate of one deployed encode/decode, computed directly on
// tensors without entropy coding.
struct PipelineResult {
  tensor::Tensor y;
  tensor::Tensor z_hat;
  tensor::Tensor mu;
  tensor::Tensor sigma;
  tensor::Tensor y_hat;
  tensor::Tensor x_hat;        // (N_pad, 3) unclipped
  std::vector<Color> colors;   // original point order
  double latent_bits = 0.0;    // sum of -log2 P(y_hat | mu, sigma)
  double hyper_bits = 0.0;     // sum of -log2 P(z_hat | prior)
};
PipelineResult RunPipeline(const PointCloud& cloud, const CodecModel& model);

Bitstream Compress(const PointCloud& cloud, const CodecModel& model);
// `geometry` supplies the positions (its colors are ignored). Throws
// kGeometryMismatch when its size disagrees with the header.
PointCloud Decompress(const Bitstream& stream, const PointCloud& geometry,
                      const CodecModel& model);

// A single-pass compressor as seen by the multi-generation harness.
class Codec {
 public:
  virtual ~Codec() = default;
  virtual std::string name() const = 0;
  virtual Bitstream Compress(const PointCloud& cloud) const = 0;
  virtual PointCloud Decompress(const Bitstream& stream, const PointCloud& geometry) const = 0;
};

class LearnedCodec : public Codec {
 public:
  explicit LearnedCodec(CodecModel model, std::string name = "learned")
      : model_(std::move(model)), name_(std::move(name)) {}

  std::string name() const override { return name_; }
  Bitstream Compress(const PointCloud& cloud) const override {
    return mgpc::Compress(cloud, model_);
  }
  PointCloud Decompress(const Bitstream& stream, const PointCloud& geometry) const override {
    return mgpc::Decompress(stream, geometry, model_);
  }
  const CodecModel& model() const { return model_; }

 private:
  CodecModel model_;
  std::string name_;
};

}  // namespace mgpc

#endif  // MGPC_CODEC_CODEC_H_
