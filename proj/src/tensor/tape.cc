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

#include "mgpc/tensor/tape.h"

#include <cmath>

#include "mgpc/common/error.h"

namespace mgpc::tensor {

const Tensor& Var::value() const { return tape_->ValueOf(id_); }

bool Var::requires_grad() const { return tape_->RequiresGrad(id_); }

Var Tape::Constant(Tensor value) {
  Node& n = nodes_.emplace_back();
  n.value = std::move(value);
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

Var Tape::Leaf(Tensor value) {
  Node& n = nodes_.emplace_back();
  n.value = std::move(value);
  n.requires_grad = grad_enabled_;
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

Var Tape::Param(const Parameter& p) {
  auto it = param_leaves_.find(&p);
  if (it != param_leaves_.end()) return Var(this, it->second);
  Var v = Leaf(p.value);
  param_leaves_.emplace(&p, v.id());
  return v;
}

Var Tape::Record(Tensor value, std::span<const Var> inputs, BackwardFn fn) {
  bool needs = false;
  if (grad_enabled_) {
    for (const Var& in : inputs) {
      if (in.tape() != this) {
        throw Error(ErrorCode::kInvalidArgument, "operation mixes variables from different tapes");
      }
      needs = needs || nodes_[in.id()].requires_grad;
    }
  }
  Node& n = nodes_.emplace_back();
  n.value = std::move(value);
  n.requires_grad = needs;
  if (needs) n.backward = std::move(fn);
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

Tensor* Tape::GradBuffer(int id) {
  Node& n = nodes_[id];
  if (!n.requires_grad) return nullptr;
  if (!n.has_grad) {
    n.grad = Tensor(n.value.shape(), 0.0);
    n.has_grad = true;
  }
  return &n.grad;
}

void Tape::Backward(Var loss) {
  if (loss.tape() != this) {
    throw Error(ErrorCode::kInvalidArgument, "loss is not on this tape");
  }
  Node& root = nodes_[loss.id()];
  if (root.value.size() != 1) {
    throw Error(ErrorCode::kNotScalar,
                "loss must be scalar, got shape " + ShapeString(root.value.shape()));
  }
  if (!root.requires_grad) {
    throw Error(ErrorCode::kNoGradient, "loss does not depend on any trainable input");
  }
  GradBuffer(loss.id())->Fill(1.0);
  for (int i = loss.id(); i >= 0; --i) {
    Node& n = nodes_[i];
    if (n.has_grad && n.backward) n.backward(*this, i);
  }
}

const Tensor& Tape::Grad(Var v) {
  Node& n = nodes_[v.id()];
  if (!n.requires_grad) {
    throw Error(ErrorCode::kNoGradient, "variable is detached and has no gradient");
  }
  if (!n.has_grad) {
    // Requires a gradient but received none: the loss does not depend on it.
    n.grad = Tensor(n.value.shape(), 0.0);
    n.has_grad = true;
  }
  return n.grad;
}

Tensor Tape::ParamGrad(const Parameter& p) const {
  auto it = param_leaves_.find(&p);
  if (it == param_leaves_.end() || !nodes_[it->second].has_grad) {
    return Tensor(p.value.shape(), 0.0);
  }
  return nodes_[it->second].grad;
}

void Tape::Pin(PinMode mode, std::vector<Tensor>* record) {
  if (mode != PinMode::kOff && record == nullptr) {
    throw Error(ErrorCode::kInvalidArgument, "pinning needs a record list");
  }
  pin_mode_ = mode;
  pinned_ = record;
  pin_cursor_ = 0;
  if (mode == PinMode::kRecord) record->clear();
}

const Tensor& Tape::NextPinned(const Tensor& x) {
  if (pin_cursor_ >= pinned_->size() || (*pinned_)[pin_cursor_].shape() != x.shape()) {
    throw Error(ErrorCode::kShapeMismatch, "replayed pins do not match the graph");
  }
  return (*pinned_)[pin_cursor_++];
}

Tensor Tape::ApplyRounding(const Tensor& x) {
  Tensor out(x.shape());
  if (pin_mode_ == PinMode::kReplay) {
    const Tensor& off = NextPinned(x);
    for (size_t i = 0; i < x.size(); ++i) out[i] = x[i] + off[i];
    return out;
  }
  for (size_t i = 0; i < x.size(); ++i) out[i] = std::round(x[i]);
  if (pin_mode_ == PinMode::kRecord) {
    Tensor off(x.shape());
    for (size_t i = 0; i < x.size(); ++i) off[i] = out[i] - x[i];
    pinned_->push_back(std::move(off));
  }
  return out;
}

Tensor Tape::ApplyDetach(const Tensor& x) {
  if (pin_mode_ == PinMode::kReplay) return NextPinned(x);
  if (pin_mode_ == PinMode::kRecord) pinned_->push_back(x);
  return x;
}

}  // namespace mgpc::tensor
