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

#ifndef MGPC_TENSOR_TAPE_H_
#define MGPC_TENSOR_TAPE_H_

#include <deque>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "mgpc/tensor/tensor.h"

namespace mgpc::tensor {

// A named trainable array. Gradients live on the Tape that used it, so a
// Parameter can be shared read-only by many tapes at once.
struct Parameter {
  std::string name;
  Tensor value;
};

class Tape;

// Handle to a node on a Tape. Cheap to copy; valid while the tape lives.
class Var {
 public:
  Var() = default;
  Var(Tape* tape, int id) : tape_(tape), id_(id) {}

  const Tensor& value() const;
  const Shape& shape() const { return value().shape(); }
  size_t size() const { return value().size(); }
  bool requires_grad() const;

  Tape* tape() const { return tape_; }
  int id() const { return id_; }
  bool valid() const { return tape_ != nullptr; }

 private:
  Tape* tape_ = nullptr;
  int id_ = -1;
};

// Records primitive operations in execution order (which is a topological
// order) and replays their adjoints in reverse. Single-threaded.
class Tape {
 public:
  using BackwardFn = std::function<void(Tape&, int self)>;

  // With grad_enabled = false nothing requires gradients and no adjoint
  // closures are stored; used for deployed inference.
  explicit Tape(bool grad_enabled = true) : grad_enabled_(grad_enabled) {}
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  bool grad_enabled() const { return grad_enabled_; }
  size_t num_nodes() const { return nodes_.size(); }

  Var Constant(Tensor value);
  // Leaf that requires a gradient (when the tape has them enabled).
  Var Leaf(Tensor value);
  // Leaf bound to a parameter; repeated calls return the same node so uses
  // accumulate into one gradient.
  Var Param(const Parameter& p);

  // Reverse sweep from a scalar loss. Each node's adjoint runs once.
  void Backward(Var loss);

  // Throws kNoGradient for nodes that do not require a gradient.
  const Tensor& Grad(Var v);
  // Zeros when the parameter was not used on this tape.
  Tensor ParamGrad(const Parameter& p) const;

  // Pinning freezes the non-smooth parts of a graph. With kRecord every
  // SteRound appends its offsets round(x) - x to `record` and every Detach
  // appends its value; with kReplay SteRound adds the recorded offsets instead
  // of rounding and Detach returns the recorded value. A replayed loss is the
  // smooth function whose exact derivative is the gradient backward computes,
  // which is what finite-difference checks need.
  enum class PinMode { kOff, kRecord, kReplay };
  void Pin(PinMode mode, std::vector<Tensor>* record);
  PinMode pin_mode() const { return pin_mode_; }
  // Rounds (or replays) one SteRound input.
  Tensor ApplyRounding(const Tensor& x);
  // The value a Detach node carries (recorded or replayed when pinned).
  Tensor ApplyDetach(const Tensor& x);

  // --- for op implementations ---
  Var Record(Tensor value, std::span<const Var> inputs, BackwardFn fn);
  Var Record(Tensor value, std::initializer_list<Var> inputs, BackwardFn fn) {
    return Record(std::move(value), std::span<const Var>(inputs.begin(), inputs.size()),
                  std::move(fn));
  }
  const Tensor& ValueOf(int id) const { return nodes_[id].value; }
  bool RequiresGrad(int id) const { return nodes_[id].requires_grad; }
  // Adjoint accumulator of an input, allocated on first use; nullptr when
  // the node does not require a gradient.
  Tensor* GradBuffer(int id);
  const Tensor& OutGrad(int id) const { return nodes_[id].grad; }

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    bool requires_grad = false;
    bool has_grad = false;
    BackwardFn backward;
  };

  std::deque<Node> nodes_;
  std::unordered_map<const Parameter*, int> param_leaves_;
  bool grad_enabled_;
  const Tensor& NextPinned(const Tensor& x);

  PinMode pin_mode_ = PinMode::kOff;
  std::vector<Tensor>* pinned_ = nullptr;
  size_t pin_cursor_ = 0;
};

}  // namespace mgpc::tensor

#endif  // MGPC_TENSOR_TAPE_H_
