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

#include "mgpc/tensor/ops.h"

#include <algorithm>
#include <cmath>
#include <memory>
#include <span>
#include <string>

#include "mgpc/common/error.h"
#include "mgpc/tensor/special.h"

namespace mgpc::tensor {
namespace {

[[noreturn]] void ShapeError(const std::string& op, const std::string& detail) {
  throw Error(ErrorCode::kShapeMismatch, op + ": " + detail);
}

void RequireSameShape(const char* op, Var a, Var b) {
  if (a.tape() != b.tape()) {
    throw Error(ErrorCode::kInvalidArgument, std::string(op) + ": inputs on different tapes");
  }
  if (a.shape() != b.shape()) {
    ShapeError(op, "shapes " + ShapeString(a.shape()) + " and " + ShapeString(b.shape()) +
                       " differ");
  }
}

void RequireRank(const char* op, Var x, size_t rank) {
  if (x.value().rank() != rank) {
    ShapeError(op, "expected rank " + std::to_string(rank) + ", got shape " +
                       ShapeString(x.shape()));
  }
}

// Unary elementwise op with adjoint g * dfdx(x, y).
template <typename F, typename D>
Var Unary(Var x, F f, D dfdx) {
  const Tensor& xv = x.value();
  Tensor out(xv.shape());
  for (size_t i = 0; i < xv.size(); ++i) out[i] = f(xv[i]);
  const int ix = x.id();
  return x.tape()->Record(std::move(out), {x}, [ix, dfdx](Tape& t, int self) {
    Tensor* gx = t.GradBuffer(ix);
    if (!gx) return;
    const Tensor& g = t.OutGrad(self);
    const Tensor& xv = t.ValueOf(ix);
    const Tensor& yv = t.ValueOf(self);
    for (size_t i = 0; i < g.size(); ++i) {
      if (g[i] != 0.0) (*gx)[i] += g[i] * dfdx(xv[i], yv[i]);
    }
  });
}

}  // namespace

Var Add(Var a, Var b) {
  RequireSameShape("add", a, b);
  Tensor out = a.value();
  const Tensor& bv = b.value();
  for (size_t i = 0; i < out.size(); ++i) out[i] += bv[i];
  const int ia = a.id(), ib = b.id();
  return a.tape()->Record(std::move(out), {a, b}, [ia, ib](Tape& t, int self) {
    const Tensor& g = t.OutGrad(self);
    if (Tensor* ga = t.GradBuffer(ia)) {
      for (size_t i = 0; i < g.size(); ++i) (*ga)[i] += g[i];
    }
    if (Tensor* gb = t.GradBuffer(ib)) {
      for (size_t i = 0; i < g.size(); ++i) (*gb)[i] += g[i];
    }
  });
}

Var Sub(Var a, Var b) {
  RequireSameShape("sub", a, b);
  Tensor out = a.value();
  const Tensor& bv = b.value();
  for (size_t i = 0; i < out.size(); ++i) out[i] -= bv[i];
  const int ia = a.id(), ib = b.id();
  return a.tape()->Record(std::move(out), {a, b}, [ia, ib](Tape& t, int self) {
    const Tensor& g = t.OutGrad(self);
    if (Tensor* ga = t.GradBuffer(ia)) {
      for (size_t i = 0; i < g.size(); ++i) (*ga)[i] += g[i];
    }
    if (Tensor* gb = t.GradBuffer(ib)) {
      for (size_t i = 0; i < g.size(); ++i) (*gb)[i] -= g[i];
    }
  });
}

Var Mul(Var a, Var b) {
  RequireSameShape("mul", a, b);
  Tensor out = a.value();
  const Tensor& bv = b.value();
  for (size_t i = 0; i < out.size(); ++i) out[i] *= bv[i];
  const int ia = a.id(), ib = b.id();
  return a.tape()->Record(std::move(out), {a, b}, [ia, ib](Tape& t, int self) {
    const Tensor& g = t.OutGrad(self);
    const Tensor& av = t.ValueOf(ia);
    const Tensor& bv = t.ValueOf(ib);
    if (Tensor* ga = t.GradBuffer(ia)) {
      for (size_t i = 0; i < g.size(); ++i) (*ga)[i] += g[i] * bv[i];
    }
    if (Tensor* gb = t.GradBuffer(ib)) {
      for (size_t i = 0; i < g.size(); ++i) (*gb)[i] += g[i] * av[i];
    }
  });
}

Var Div(Var a, Var b) {
  RequireSameShape("div", a, b);
  Tensor out = a.value();
  const Tensor& bv = b.value();
  for (size_t i = 0; i < out.size(); ++i) out[i] /= bv[i];
  const int ia = a.id(), ib = b.id();
  return a.tape()->Record(std::move(out), {a, b}, [ia, ib](Tape& t, int self) {
    const Tensor& g = t.OutGrad(self);
    const Tensor& bv = t.ValueOf(ib);
    const Tensor& yv = t.ValueOf(self);
    if (Tensor* ga = t.GradBuffer(ia)) {
      for (size_t i = 0; i < g.size(); ++i) (*ga)[i] += g[i] / bv[i];
    }
    if (Tensor* gb = t.GradBuffer(ib)) {
      for (size_t i = 0; i < g.size(); ++i) (*gb)[i] -= g[i] * yv[i] / bv[i];
    }
  });
}

Var AddScalar(Var x, double c) {
  return Unary(x, [c](double v) { return v + c; }, [](double, double) { return 1.0; });
}

Var MulScalar(Var x, double c) {
  return Unary(x, [c](double v) { return v * c; }, [c](double, double) { return c; });
}

Var DivScalar(Var x, double c) {
  return Unary(x, [c](double v) { return v / c; }, [c](double, double) { return 1.0 / c; });
}

Var Relu(Var x) {
  return Unary(
      x, [](double v) { return v > 0.0 ? v : 0.0; },
      [](double v, double) { return v > 0.0 ? 1.0 : 0.0; });
}

Var Exp(Var x) {
  // The adjoint is skipped for zero upstream gradients (see Unary), so an
  // overflowed exp behind a saturated clamp never yields inf * 0.
  return Unary(x, [](double v) { return std::exp(v); }, [](double, double y) { return y; });
}

Var Log(Var x) {
  return Unary(x, [](double v) { return std::log(v); }, [](double v, double) { return 1.0 / v; });
}

Var Abs(Var x) {
  return Unary(
      x, [](double v) { return std::fabs(v); },
      [](double v, double) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); });
}

Var Square(Var x) {
  return Unary(x, [](double v) { return v * v; }, [](double v, double) { return 2.0 * v; });
}

Var Clamp(Var x, double lo, double hi) {
  return Unary(
      x, [lo, hi](double v) { return std::min(std::max(v, lo), hi); },
      [lo, hi](double v, double) { return (v >= lo && v <= hi) ? 1.0 : 0.0; });
}

Var Sqrt(Var x) {
  return Unary(x, [](double v) { return std::sqrt(v); },
               [](double, double y) { return y > 0.0 ? 0.5 / y : 0.0; });
}

Var GaussianCdf(Var x) {
  return Unary(x, [](double v) { return NormalCdf(v); },
               [](double v, double) { return NormalPdf(v); });
}

Var SteRound(Var x) {
  Tensor out = x.tape()->ApplyRounding(x.value());
  const int ix = x.id();
  return x.tape()->Record(std::move(out), {x}, [ix](Tape& t, int self) {
    Tensor* gx = t.GradBuffer(ix);
    if (!gx) return;
    const Tensor& g = t.OutGrad(self);
    for (size_t i = 0; i < g.size(); ++i) (*gx)[i] += g[i];
  });
}

Var AddUniformNoise(Var x, Rng& rng) {
  const Tensor& xv = x.value();
  Tensor out(xv.shape());
  for (size_t i = 0; i < xv.size(); ++i) out[i] = xv[i] + (rng.Uniform() - 0.5);
  const int ix = x.id();
  return x.tape()->Record(std::move(out), {x}, [ix](Tape& t, int self) {
    Tensor* gx = t.GradBuffer(ix);
    if (!gx) return;
    const Tensor& g = t.OutGrad(self);
    for (size_t i = 0; i < g.size(); ++i) (*gx)[i] += g[i];
  });
}

Var Detach(Var x) { return x.tape()->Constant(x.tape()->ApplyDetach(x.value())); }

Var Sum(Var x) {
  double s = 0.0;
  for (double v : x.value().values()) s += v;
  const int ix = x.id();
  return x.tape()->Record(Tensor::Scalar(s), {x}, [ix](Tape& t, int self) {
    Tensor* gx = t.GradBuffer(ix);
    if (!gx) return;
    const double g = t.OutGrad(self)[0];
    for (double& v : gx->values()) v += g;
  });
}

Var Mean(Var x) {
  const size_t n = x.size();
  if (n == 0) ShapeError("mean", "empty input");
  double s = 0.0;
  for (double v : x.value().values()) s += v;
  const int ix = x.id();
  return x.tape()->Record(Tensor::Scalar(s / static_cast<double>(n)), {x},
                          [ix, n](Tape& t, int self) {
                            Tensor* gx = t.GradBuffer(ix);
                            if (!gx) return;
                            const double g = t.OutGrad(self)[0] / static_cast<double>(n);
                            for (double& v : gx->values()) v += g;
                          });
}

Var MatMul(Var a, Var b) {
  RequireRank("matmul", a, 2);
  RequireRank("matmul", b, 2);
  const size_t m = a.shape()[0], k = a.shape()[1], n = b.shape()[1];
  if (b.shape()[0] != k) {
    ShapeError("matmul", "inner dimensions of " + ShapeString(a.shape()) + " and " +
                             ShapeString(b.shape()) + " differ");
  }
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  Tensor out({m, n});
  for (size_t i = 0; i < m; ++i) {
    for (size_t p = 0; p < k; ++p) {
      const double x = av[i * k + p];
      for (size_t j = 0; j < n; ++j) out[i * n + j] += x * bv[p * n + j];
    }
  }
  const int ia = a.id(), ib = b.id();
  return a.tape()->Record(std::move(out), {a, b}, [ia, ib, m, k, n](Tape& t, int self) {
    const Tensor& g = t.OutGrad(self);
    const Tensor& av = t.ValueOf(ia);
    const Tensor& bv = t.ValueOf(ib);
    if (Tensor* ga = t.GradBuffer(ia)) {
      for (size_t i = 0; i < m; ++i) {
        for (size_t p = 0; p < k; ++p) {
          double s = 0.0;
          for (size_t j = 0; j < n; ++j) s += g[i * n + j] * bv[p * n + j];
          (*ga)[i * k + p] += s;
        }
      }
    }
    if (Tensor* gb = t.GradBuffer(ib)) {
      for (size_t i = 0; i < m; ++i) {
        for (size_t p = 0; p < k; ++p) {
          const double x = av[i * k + p];
          for (size_t j = 0; j < n; ++j) (*gb)[p * n + j] += x * g[i * n + j];
        }
      }
    }
  });
}

Var Concat(const std::vector<Var>& parts, size_t axis) {
  if (parts.empty()) ShapeError("concat", "no inputs");
  if (axis > 1) ShapeError("concat", "axis must be 0 or 1");
  for (const Var& p : parts) RequireRank("concat", p, 2);
  const size_t rows0 = parts[0].shape()[0], cols0 = parts[0].shape()[1];
  size_t total = 0;
  for (const Var& p : parts) {
    const size_t other = axis == 0 ? p.shape()[1] : p.shape()[0];
    if (other != (axis == 0 ? cols0 : rows0)) {
      ShapeError("concat", "shape " + ShapeString(p.shape()) + " incompatible with " +
                               ShapeString(parts[0].shape()) + " on axis " +
                               std::to_string(axis));
    }
    if (p.tape() != parts[0].tape()) {
      throw Error(ErrorCode::kInvalidArgument, "concat: inputs on different tapes");
    }
    total += p.shape()[axis];
  }
  const size_t rows = axis == 0 ? total : rows0;
  const size_t cols = axis == 1 ? total : cols0;
  Tensor out({rows, cols});
  std::vector<int> ids;
  std::vector<size_t> offsets;
  size_t offset = 0;
  for (const Var& p : parts) {
    const Tensor& v = p.value();
    const size_t pr = v.dim(0), pc = v.dim(1);
    for (size_t r = 0; r < pr; ++r) {
      for (size_t c = 0; c < pc; ++c) {
        if (axis == 0) {
          out.at(offset + r, c) = v.at(r, c);
        } else {
          out.at(r, offset + c) = v.at(r, c);
        }
      }
    }
    ids.push_back(p.id());
    offsets.push_back(offset);
    offset += p.shape()[axis];
  }
  Tape* tape = parts[0].tape();
  auto fn = [ids, offsets, axis](Tape& t, int self) {
    const Tensor& g = t.OutGrad(self);
    for (size_t q = 0; q < ids.size(); ++q) {
      Tensor* gp = t.GradBuffer(ids[q]);
      if (!gp) continue;
      const size_t pr = gp->dim(0), pc = gp->dim(1);
      for (size_t r = 0; r < pr; ++r) {
        for (size_t c = 0; c < pc; ++c) {
          gp->at(r, c) += axis == 0 ? g.at(offsets[q] + r, c) : g.at(r, offsets[q] + c);
        }
      }
    }
  };
  return tape->Record(std::move(out), std::span<const Var>(parts), fn);
}

Var Slice(Var x, size_t axis, size_t begin, size_t end) {
  const Shape& s = x.shape();
  if (s.size() != 1 && s.size() != 2) ShapeError("slice", "rank must be 1 or 2");
  if (axis >= s.size() || begin > end || end > s[axis]) {
    ShapeError("slice", "range [" + std::to_string(begin) + ", " + std::to_string(end) +
                            ") on axis " + std::to_string(axis) + " of " + ShapeString(s));
  }
  const size_t rows = s[0];
  const size_t cols = s.size() == 2 ? s[1] : 1;
  Shape out_shape = s;
  out_shape[axis] = end - begin;
  Tensor out(out_shape);
  const Tensor& v = x.value();
  const size_t out_cols = s.size() == 2 ? out_shape[1] : 1;
  const size_t r0 = axis == 0 ? begin : 0, r1 = axis == 0 ? end : rows;
  const size_t c0 = axis == 1 ? begin : 0, c1 = axis == 1 ? end : cols;
  for (size_t r = r0; r < r1; ++r) {
    for (size_t c = c0; c < c1; ++c) out[(r - r0) * out_cols + (c - c0)] = v[r * cols + c];
  }
  const int ix = x.id();
  return x.tape()->Record(std::move(out), {x},
                          [ix, r0, r1, c0, c1, cols, out_cols](Tape& t, int self) {
                            Tensor* gx = t.GradBuffer(ix);
                            if (!gx) return;
                            const Tensor& g = t.OutGrad(self);
                            for (size_t r = r0; r < r1; ++r) {
                              for (size_t c = c0; c < c1; ++c) {
                                (*gx)[r * cols + c] += g[(r - r0) * out_cols + (c - c0)];
                              }
                            }
                          });
}

Var BroadcastRows(Var row, size_t rows) {
  RequireRank("broadcast_rows", row, 1);
  const size_t cols = row.shape()[0];
  Tensor out({rows, cols});
  const Tensor& v = row.value();
  for (size_t r = 0; r < rows; ++r) {
    for (size_t c = 0; c < cols; ++c) out[r * cols + c] = v[c];
  }
  const int ix = row.id();
  return row.tape()->Record(std::move(out), {row}, [ix, rows, cols](Tape& t, int self) {
    Tensor* gx = t.GradBuffer(ix);
    if (!gx) return;
    const Tensor& g = t.OutGrad(self);
    for (size_t r = 0; r < rows; ++r) {
      for (size_t c = 0; c < cols; ++c) (*gx)[c] += g[r * cols + c];
    }
  });
}

Var MeanSquaredError(Var a, Var b) { return Mean(Square(Sub(a, b))); }

Var SumSquaredError(Var a, Var b) { return Sum(Square(Sub(a, b))); }

// --- convolutions ---

namespace {

// Gather table: for output position o and tap k, the input row to read
// (already clamped to the signal), or -1 when the tap does not contribute.
struct ConvPlan {
  size_t in_len = 0;
  size_t out_len = 0;
  size_t kernel = 0;
  std::vector<int32_t> index;
};

ConvPlan PlanConv(size_t in_len, size_t kernel, size_t stride) {
  ConvPlan plan;
  plan.in_len = in_len;
  plan.kernel = kernel;
  plan.out_len = (in_len + stride - 1) / stride;
  const long pad_total =
      std::max<long>(static_cast<long>((plan.out_len - 1) * stride + kernel) -
                         static_cast<long>(in_len),
                     0);
  const long pad_left = pad_total / 2;
  plan.index.resize(plan.out_len * kernel);
  for (size_t o = 0; o < plan.out_len; ++o) {
    for (size_t k = 0; k < kernel; ++k) {
      long p = static_cast<long>(o * stride + k) - pad_left;
      p = std::clamp<long>(p, 0, static_cast<long>(in_len) - 1);
      plan.index[o * kernel + k] = static_cast<int32_t>(p);
    }
  }
  return plan;
}

ConvPlan PlanConvTranspose(size_t in_len, size_t kernel, size_t stride) {
  ConvPlan plan;
  plan.in_len = in_len;
  plan.kernel = kernel;
  plan.out_len = in_len * stride;
  const long pad = static_cast<long>(kernel - 1) / 2;
  const long s = static_cast<long>(stride);
  plan.index.resize(plan.out_len * kernel);
  for (size_t o = 0; o < plan.out_len; ++o) {
    for (size_t k = 0; k < kernel; ++k) {
      const long num = static_cast<long>(o) + pad - static_cast<long>(k);
      if (((num % s) + s) % s != 0) {
        plan.index[o * kernel + k] = -1;
        continue;
      }
      long l = num / s;
      l = std::clamp<long>(l, 0, static_cast<long>(in_len) - 1);
      plan.index[o * kernel + k] = static_cast<int32_t>(l);
    }
  }
  return plan;
}

Var RunConv(const char* op, Var input, Var weight, Var bias, ConvPlan plan) {
  RequireRank(op, input, 2);
  RequireRank(op, weight, 3);
  RequireRank(op, bias, 1);
  const size_t kernel = weight.shape()[0];
  const size_t cin = weight.shape()[1];
  const size_t cout = weight.shape()[2];
  if (input.shape()[1] != cin) {
    ShapeError(op, "input " + ShapeString(input.shape()) + " has " +
                       std::to_string(input.shape()[1]) + " channels but weight " +
                       ShapeString(weight.shape()) + " expects " + std::to_string(cin));
  }
  if (bias.shape()[0] != cout) {
    ShapeError(op, "bias " + ShapeString(bias.shape()) + " does not match weight " +
                       ShapeString(weight.shape()));
  }
  if (input.shape()[0] == 0) ShapeError(op, "empty input signal");
  const size_t out_len = plan.out_len;
  const Tensor& x = input.value();
  const Tensor& w = weight.value();
  const Tensor& b = bias.value();
  Tensor out({out_len, cout});
  for (size_t o = 0; o < out_len; ++o) {
    double* orow = out.data() + o * cout;
    for (size_t co = 0; co < cout; ++co) orow[co] = b[co];
    for (size_t k = 0; k < kernel; ++k) {
      const int32_t p = plan.index[o * kernel + k];
      if (p < 0) continue;
      const double* xrow = x.data() + static_cast<size_t>(p) * cin;
      const double* wk = w.data() + k * cin * cout;
      for (size_t ci = 0; ci < cin; ++ci) {
        const double a = xrow[ci];
        if (a == 0.0) continue;
        const double* wrow = wk + ci * cout;
        for (size_t co = 0; co < cout; ++co) orow[co] += a * wrow[co];
      }
    }
  }
  const int ix = input.id(), iw = weight.id(), ib = bias.id();
  auto shared_plan = std::make_shared<ConvPlan>(std::move(plan));
  return input.tape()->Record(
      std::move(out), {input, weight, bias},
      [ix, iw, ib, shared_plan, kernel, cin, cout](Tape& t, int self) {
        const ConvPlan& plan = *shared_plan;
        const Tensor& g = t.OutGrad(self);
        const Tensor& x = t.ValueOf(ix);
        const Tensor& w = t.ValueOf(iw);
        if (Tensor* gb = t.GradBuffer(ib)) {
          for (size_t o = 0; o < plan.out_len; ++o) {
            for (size_t co = 0; co < cout; ++co) (*gb)[co] += g[o * cout + co];
          }
        }
        if (Tensor* gw = t.GradBuffer(iw)) {
          for (size_t o = 0; o < plan.out_len; ++o) {
            const double* grow = g.data() + o * cout;
            for (size_t k = 0; k < kernel; ++k) {
              const int32_t p = plan.index[o * kernel + k];
              if (p < 0) continue;
              const double* xrow = x.data() + static_cast<size_t>(p) * cin;
              double* gwk = gw->data() + k * cin * cout;
              for (size_t ci = 0; ci < cin; ++ci) {
                const double a = xrow[ci];
                if (a == 0.0) continue;
                double* gwrow = gwk + ci * cout;
                for (size_t co = 0; co < cout; ++co) gwrow[co] += a * grow[co];
              }
            }
          }
        }
        if (Tensor* gx = t.GradBuffer(ix)) {
          // Transposed weights make the inner loop contiguous in ci.
          std::vector<double> wt(kernel * cout * cin);
          for (size_t k = 0; k < kernel; ++k) {
            for (size_t ci = 0; ci < cin; ++ci) {
              for (size_t co = 0; co < cout; ++co) {
                wt[(k * cout + co) * cin + ci] = w[(k * cin + ci) * cout + co];
              }
            }
          }
          for (size_t o = 0; o < plan.out_len; ++o) {
            const double* grow = g.data() + o * cout;
            for (size_t k = 0; k < kernel; ++k) {
              const int32_t p = plan.index[o * kernel + k];
              if (p < 0) continue;
              double* gxrow = gx->data() + static_cast<size_t>(p) * cin;
              const double* wtk = wt.data() + k * cout * cin;
              for (size_t co = 0; co < cout; ++co) {
                const double gv = grow[co];
                if (gv == 0.0) continue;
                const double* wtrow = wtk + co * cin;
                for (size_t ci = 0; ci < cin; ++ci) gxrow[ci] += gv * wtrow[ci];
              }
            }
          }
        }
      });
}

}  // namespace

Var Conv1d(Var input, Var weight, Var bias, size_t stride) {
  RequireRank("conv1d", input, 2);
  RequireRank("conv1d", weight, 3);
  if (stride == 0) ShapeError("conv1d", "stride must be positive");
  return RunConv("conv1d", input, weight, bias,
                 PlanConv(input.shape()[0], weight.shape()[0], stride));
}

Var ConvTranspose1d(Var input, Var weight, Var bias, size_t stride) {
  RequireRank("conv_transpose1d", input, 2);
  RequireRank("conv_transpose1d", weight, 3);
  if (stride == 0) ShapeError("conv_transpose1d", "stride must be positive");
  return RunConv("conv_transpose1d", input, weight, bias,
                 PlanConvTranspose(input.shape()[0], weight.shape()[0], stride));
}

}  // namespace mgpc::tensor
