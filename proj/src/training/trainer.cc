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

#include "mgpc/training/trainer.h"

#include <cmath>
#include <cstdio>
#include <thread>
#include <unordered_map>

#include "mgpc/codec/bitstream.h"
#include "mgpc/codec/codec.h"
#include "mgpc/common/error.h"
#include "mgpc/common/key_value.h"
#include "mgpc/common/rng.h"
#include "mgpc/pointcloud/spatial.h"
#include "mgpc/tensor/ops.h"

namespace mgpc {

using tensor::NamedTensor;
using tensor::Parameter;
using tensor::Tape;
using tensor::Tensor;

namespace {

// Seed-derivation tags.
constexpr uint64_t kInitTag = 1;
constexpr uint64_t kCropTag = 2;
constexpr uint64_t kShuffleTag = 3;
constexpr uint64_t kNoiseTag = 4;

constexpr size_t kLogColumns = 8;

struct ItemResult {
  std::vector<Tensor> grads;
  double rate = 0, distortion = 0, mic = 0, trc = 0, lcc = 0, total = 0;
};

double ValueOrThrow(tensor::Var v, const char* name, int epoch) {
  if (!v.valid()) return 0.0;
  const double x = v.value()[0];
  if (!std::isfinite(x)) {
    throw Error(ErrorCode::kNonFinite,
                std::string("non-finite ") + name + " in epoch " + std::to_string(epoch + 1));
  }
  return x;
}

ItemResult EvaluateItem(const CodecModel& model, const PreparedSignal& block,
                        const TrainConfig& config, uint64_t noise_seed, int epoch) {
  Tape tape;
  LossOptions options{true, noise_seed, config.distance};
  LossTerms t = ComputeLoss(tape, model, block.x, block.num_points, config.constraint_set,
                            config.weights, options);
  ItemResult r;
  r.rate = ValueOrThrow(t.rate, "L_Rate", epoch);
  r.distortion = ValueOrThrow(t.distortion, "L_D", epoch);
  r.mic = ValueOrThrow(t.mic, "L_MI", epoch);
  r.trc = ValueOrThrow(t.trc, "L_TR", epoch);
  r.lcc = ValueOrThrow(t.lcc, "L_LC", epoch);
  r.total = ValueOrThrow(t.total, "total loss", epoch);
  tape.Backward(t.total);
  for (const Parameter* p : model.Parameters()) r.grads.push_back(tape.ParamGrad(*p));
  return r;
}

std::string FormatNumber(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

bool ApplyTrainSetting(TrainConfig& c, std::string_view key, std::string_view value,
                       bool* alpha_explicit) {
  auto as_int = [&] { return static_cast<int>(ParseInt(key, value)); };
  if (key == "epochs") {
    c.epochs = as_int();
  } else if (key == "batch_size") {
    c.batch_size = as_int();
  } else if (key == "lr0") {
    c.lr0 = ParseDouble(key, value);
  } else if (key == "lr_decay") {
    c.lr_decay = ParseDouble(key, value);
  } else if (key == "lr_decay_every") {
    c.lr_decay_every = as_int();
  } else if (key == "seed") {
    c.seed = ParseUint(key, value);
  } else if (key == "crop_points" || key == "K_crop") {
    c.crop_points = ParseUint(key, value);
  } else if (key == "crops_per_cloud") {
    c.crops_per_cloud = as_int();
  } else if (key == "constraint_set") {
    c.constraint_set = ParseConstraintSet(value);
  } else if (key == "lambda") {
    c.weights.lambda = ParseDouble(key, value);
    if (!(alpha_explicit && *alpha_explicit)) c.weights.alpha = c.weights.lambda;
  } else if (key == "alpha") {
    c.weights.alpha = ParseDouble(key, value);
    if (alpha_explicit) *alpha_explicit = true;
  } else if (key == "beta") {
    c.weights.beta = ParseDouble(key, value);
  } else if (key == "distance") {
    c.distance = ParseDistanceKind(value);
  } else if (key == "hidden_channels") {
    c.model.hidden = ParseUint(key, value);
  } else if (key == "latent_channels") {
    c.model.latent = ParseUint(key, value);
  } else if (key == "hyper_channels") {
    c.model.hyper = ParseUint(key, value);
  } else if (key == "threads") {
    c.threads = as_int();
  } else {
    return false;
  }
  return true;
}

void ValidateTrainConfig(const TrainConfig& c) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
  };
  require(c.epochs > 0, "epochs must be positive");
  require(c.batch_size > 0, "batch_size must be positive");
  require(c.lr0 > 0, "lr0 must be positive");
  require(c.lr_decay > 0 && c.lr_decay <= 1, "lr_decay must be in (0, 1]");
  require(c.lr_decay_every > 0, "lr_decay_every must be positive");
  require(c.crop_points >= 2, "crop_points must be at least 2");
  require(c.crops_per_cloud > 0, "crops_per_cloud must be positive");
  require(c.weights.lambda > 0, "lambda must be positive");
  require(c.weights.alpha >= 0, "alpha must be non-negative");
  require(c.weights.beta >= 0, "beta must be non-negative");
  require(c.model.hidden > 0 && c.model.latent > 0 && c.model.hyper > 0,
          "channel widths must be positive");
  require(c.threads > 0, "threads must be positive");
}

double LearningRate(const TrainConfig& config, int epoch) {
  return config.lr0 * std::pow(config.lr_decay, epoch / config.lr_decay_every);
}

std::string FormatTrainLog(std::span<const EpochLog> log) {
  std::string out = "epoch,lr,L_Rate,L_D,L_MI,L_TR,L_LC,total\n";
  for (const EpochLog& e : log) {
    auto opt = [](bool on, double v) { return on ? FormatNumber(v) : std::string(); };
    out += std::to_string(e.epoch) + "," + FormatNumber(e.lr) + "," + FormatNumber(e.rate) + "," +
           opt(e.active.distortion, e.distortion) + "," + opt(e.active.mic, e.mic) + "," +
           opt(e.active.trc, e.trc) + "," + opt(e.active.lcc, e.lcc) + "," +
           FormatNumber(e.total) + "\n";
  }
  return out;
}

TrainState InitTrainState(const TrainConfig& config) {
  ValidateTrainConfig(config);
  TrainState s;
  s.model = MakeRandomModel(DeriveSeed(config.seed, {kInitTag}), config.model);
  s.model.lambda_id = LambdaIdFor(config.weights.lambda);
  return s;
}

void RunEpoch(TrainState& state, std::span<const PointCloud> dataset, const TrainConfig& config) {
  ValidateTrainConfig(config);
  if (dataset.empty()) throw Error(ErrorCode::kEmptyCloud, "training needs at least one cloud");
  const int epoch = state.epochs_done;
  const double lr = LearningRate(config, epoch);

  std::vector<PreparedSignal> blocks;
  for (size_t d = 0; d < dataset.size(); ++d) {
    for (int j = 0; j < config.crops_per_cloud; ++j) {
      uint64_t seed = DeriveSeed(config.seed, {kCropTag, static_cast<uint64_t>(epoch), d,
                                               static_cast<uint64_t>(j)});
      blocks.push_back(PrepareSignal(KdTreeCrop(dataset[d], config.crop_points, seed)));
    }
  }
  Rng shuffle(DeriveSeed(config.seed, {kShuffleTag, static_cast<uint64_t>(epoch)}));
  for (size_t i = blocks.size(); i > 1; --i) std::swap(blocks[i - 1], blocks[shuffle.UniformInt(i)]);

  std::vector<Parameter*> params = state.model.Parameters();
  EpochLog log;
  log.epoch = epoch + 1;
  log.lr = lr;
  log.active = TermsOf(config.constraint_set);

  const size_t batch = static_cast<size_t>(config.batch_size);
  for (size_t start = 0, step = 0; start < blocks.size(); start += batch, ++step) {
    const size_t count = std::min(batch, blocks.size() - start);
    std::vector<ItemResult> results(count);
    std::vector<std::exception_ptr> errors(count);
    auto run = [&](size_t i) {
      try {
        uint64_t noise = DeriveSeed(config.seed, {kNoiseTag, static_cast<uint64_t>(epoch), step, i});
        results[i] = EvaluateItem(state.model, blocks[start + i], config, noise, epoch);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    };
    const size_t workers = std::min<size_t>(static_cast<size_t>(config.threads), count);
    if (workers <= 1) {
      for (size_t i = 0; i < count; ++i) run(i);
    } else {
      std::vector<std::thread> pool;
      for (size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          for (size_t i = w; i < count; i += workers) run(i);
        });
      }
      for (std::thread& t : pool) t.join();
    }
    for (const std::exception_ptr& e : errors) {
      if (e) std::rethrow_exception(e);
    }

    // Fixed-order reduction so the result does not depend on scheduling.
    std::vector<Tensor> grads = std::move(results[0].grads);
    for (size_t i = 1; i < count; ++i) {
      for (size_t p = 0; p < grads.size(); ++p) {
        double* g = grads[p].data();
        const double* h = results[i].grads[p].data();
        for (size_t k = 0; k < grads[p].size(); ++k) g[k] += h[k];
      }
    }
    for (Tensor& g : grads) {
      for (double& v : g.values()) v /= static_cast<double>(count);
    }
    tensor::AdamStep(params, grads, state.adam, lr);

    for (const ItemResult& r : results) {
      log.rate += r.rate;
      log.distortion += r.distortion;
      log.mic += r.mic;
      log.trc += r.trc;
      log.lcc += r.lcc;
      log.total += r.total;
    }
  }
  const double n = static_cast<double>(blocks.size());
  log.rate /= n;
  log.distortion /= n;
  log.mic /= n;
  log.trc /= n;
  log.lcc /= n;
  log.total /= n;
  state.log.push_back(log);
  state.epochs_done = epoch + 1;
}

void Train(TrainState& state, std::span<const PointCloud> dataset, const TrainConfig& config,
           const std::function<void(const TrainState&)>& on_epoch) {
  while (state.epochs_done < config.epochs) {
    RunEpoch(state, dataset, config);
    if (on_epoch) on_epoch(state);
  }
}

std::vector<NamedTensor> TrainStateToEntries(const TrainState& state) {
  std::vector<NamedTensor> out = ModelToEntries(state.model);
  const tensor::AdamState& adam = state.adam;
  out.push_back({"adam.step", Tensor::Scalar(static_cast<double>(adam.step))});
  std::vector<const Parameter*> params = state.model.Parameters();
  for (size_t i = 0; i < adam.first_moment.size() && i < params.size(); ++i) {
    out.push_back({"adam.m." + params[i]->name, adam.first_moment[i]});
    out.push_back({"adam.v." + params[i]->name, adam.second_moment[i]});
  }
  out.push_back({"train.epochs_done", Tensor::Scalar(state.epochs_done)});
  if (!state.log.empty()) {
    std::vector<double> rows;
    for (const EpochLog& e : state.log) {
      const double nan = std::nan("");
      rows.insert(rows.end(), {static_cast<double>(e.epoch), e.lr, e.rate,
                               e.active.distortion ? e.distortion : nan,
                               e.active.mic ? e.mic : nan, e.active.trc ? e.trc : nan,
                               e.active.lcc ? e.lcc : nan, e.total});
    }
    out.push_back({"train.log", Tensor({state.log.size(), kLogColumns}, std::move(rows))});
  }
  return out;
}

TrainState TrainStateFromEntries(std::span<const NamedTensor> entries) {
  TrainState s;
  s.model = ModelFromEntries(entries);
  std::unordered_map<std::string, const Tensor*> by_name;
  for (const NamedTensor& e : entries) by_name[e.name] = &e.tensor;
  auto scalar = [&](const std::string& name) -> double {
    auto it = by_name.find(name);
    if (it == by_name.end() || it->second->size() != 1) {
      throw Error(ErrorCode::kMissingProperty, "training checkpoint lacks '" + name + "'");
    }
    return (*it->second)[0];
  };
  s.adam.step = static_cast<int64_t>(scalar("adam.step"));
  s.epochs_done = static_cast<int>(scalar("train.epochs_done"));
  if (s.adam.step > 0) {
    for (const Parameter* p : s.model.Parameters()) {
      auto m = by_name.find("adam.m." + p->name);
      auto v = by_name.find("adam.v." + p->name);
      if (m == by_name.end() || v == by_name.end()) {
        throw Error(ErrorCode::kMissingProperty, "training checkpoint lacks moments of '" +
                                                     p->name + "'");
      }
      s.adam.first_moment.push_back(*m->second);
      s.adam.second_moment.push_back(*v->second);
    }
  }
  if (auto it = by_name.find("train.log"); it != by_name.end()) {
    const Tensor& t = *it->second;
    if (t.rank() != 2 || t.dim(1) != kLogColumns) {
      throw Error(ErrorCode::kShapeMismatch, "training log has the wrong shape");
    }
    for (size_t r = 0; r < t.dim(0); ++r) {
      EpochLog e;
      e.epoch = static_cast<int>(t.at(r, 0));
      e.lr = t.at(r, 1);
      e.rate = t.at(r, 2);
      e.active = {!std::isnan(t.at(r, 3)), !std::isnan(t.at(r, 4)), !std::isnan(t.at(r, 5)),
                  !std::isnan(t.at(r, 6))};
      e.distortion = e.active.distortion ? t.at(r, 3) : 0.0;
      e.mic = e.active.mic ? t.at(r, 4) : 0.0;
      e.trc = e.active.trc ? t.at(r, 5) : 0.0;
      e.lcc = e.active.lcc ? t.at(r, 6) : 0.0;
      e.total = t.at(r, 7);
      s.log.push_back(e);
    }
  }
  return s;
}

}  // namespace mgpc
