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

#ifndef MGPC_TENSOR_TENSOR_H_
#define MGPC_TENSOR_TENSOR_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace mgpc::tensor {

using Shape = std::vector<size_t>;

size_t NumElements(const Shape& shape);
std::string ShapeString(const Shape& shape);

// Dense row-major float64 array.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape, double fill = 0.0);
  Tensor(Shape shape, std::vector<double> data);

  static Tensor Scalar(double v) { return Tensor({1}, {v}); }

  const Shape& shape() const { return shape_; }
  size_t rank() const { return shape_.size(); }
  size_t dim(size_t i) const { return shape_[i]; }
  size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  const std::vector<double>& vector() const { return data_; }

  double& operator[](size_t i) { return data_[i]; }
  double operator[](size_t i) const { return data_[i]; }
  // 2-D access.
  double& at(size_t r, size_t c) { return data_[r * shape_[1] + c]; }
  double at(size_t r, size_t c) const { return data_[r * shape_[1] + c]; }

  void Fill(double v);
  bool AllFinite() const;

  bool operator==(const Tensor&) const = default;

 private:
  Shape shape_;
  std::vector<double> data_;
};

}  // namespace mgpc::tensor

#endif  // MGPC_TENSOR_TENSOR_H_
