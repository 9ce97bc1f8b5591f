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

#ifndef MGPC_TRAINING_TRAINER_H_
#define MGPC_TRAINING_TRAINER_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mgpc/codec/model.h"
#include "mgpc/pointcloud/point_cloud.h"
#include "mgpc/tensor/adam.h"
#include "mgpc/tensor/checkpoint.h"
#include "mgpc/training/losses.h"

namespace mgpc {

struct TrainConfig {
  int epochs = 200;
  int batch_size = 4;
  double lr0 = 1e-4;
  double lr_decay = 0.8;
  int lr_decay_every = 20;
  uint64_t seed = 1;
  // KD-tree crops are halved until they hold fewer than this many points.
  size_t crop_points = 250000;
  // Crops drawn from every cloud per epoch.
  int crops_per_cloud = 1;
  ConstraintSet constraint_set = ConstraintSet::kBaseline;
  LossWeights weights;
  DistanceKind distance = DistanceKind::kMse;
  ModelConfig model;
  // Batch items evaluated concurrently. Results do not depend on it.
  int threads = 1;
};

// Applies one "key = value" setting; returns false for keys it does not
// know. Setting lambda also sets alpha unless alpha is given explicitly
// (in any order).
bool ApplyTrainSetting(TrainConfig& config, std::string_view key, std::string_view value,
                       bool* alpha_explicit = nullptr);
// Throws kInvalidArgument for out-of-range values.
void ValidateTrainConfig(const TrainConfig& config);

// lr0 * lr_decay^floor(epoch / lr_decay_every), epoch counted from 0.
double LearningRate(const TrainConfig& config, int epoch);

struct EpochLog {
  int epoch = 0;  // 1-based
  double lr = 0.0;
  double rate = 0.0;
  double distortion = 0.0;
  double mic = 0.0;
  double trc = 0.0;
  double lcc = 0.0;
  double total = 0.0;
  ActiveTerms active;
};

// "epoch,lr,L_Rate,L_D,L_MI,L_TR,L_LC,total"; inactive terms are empty.
std::string FormatTrainLog(std::span<const EpochLog> log);

struct TrainState {
  CodecModel model;
  tensor::AdamState adam;
  int epochs_done = 0;
  std::vector<EpochLog> log;
};

TrainState InitTrainState(const TrainConfig& config);

// Runs one epoch in place. Throws kNonFinite naming the loss term (or the
// parameter, for gradients) and leaves the parameters untouched for the
// failing step.
void RunEpoch(TrainState& state, std::span<const PointCloud> dataset, const TrainConfig& config);

// Trains until config.epochs epochs are done, starting from `state`.
void Train(TrainState& state, std::span<const PointCloud> dataset, const TrainConfig& config,
           const std::function<void(const TrainState&)>& on_epoch = {});

// Model, optimizer moments, epoch counter and log. Loadable as a plain
// model checkpoint too (the extra entries are ignored there).
std::vector<tensor::NamedTensor> TrainStateToEntries(const TrainState& state);
TrainState TrainStateFromEntries(std::span<const tensor::NamedTensor> entries);

}  // namespace mgpc

#endif  // MGPC_TRAINING_TRAINER_H_
