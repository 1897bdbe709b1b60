/* Copyright 2026 The HoughVote Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef HOUGHVOTE_TENSOR_H_
#define HOUGHVOTE_TENSOR_H_

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "houghvote/error.h"

namespace houghvote {

using Shape = std::vector<std::size_t>;

inline std::size_t NumElements(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         std::multiplies<>());
}

inline std::string ShapeString(const Shape& shape) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) os << 'x';
    os << shape[i];
  }
  os << ']';
  return os.str();
}

// Dense row-major tensor, last dimension fastest.
template <typename T>
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape, T fill = T{})
      : shape_(std::move(shape)), data_(NumElements(shape_), fill) {}
  Tensor(Shape shape, std::vector<T> data)
      : shape_(std::move(shape)), data_(std::move(data)) {
    if (data_.size() != NumElements(shape_)) {
      throw Error(ErrorCode::kShapeMismatch,
                  "payload size " + std::to_string(data_.size()) +
                      " does not match shape " + ShapeString(shape_));
    }
  }

  const Shape& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t dim(std::size_t axis) const { return shape_.at(axis); }
  std::size_t size() const { return data_.size(); }

  std::span<T> values() & { return data_; }
  std::span<const T> values() const& { return data_; }
  // A span into a temporary would dangle.
  std::span<const T> values() const&& = delete;
  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }

  T& operator[](std::size_t flat) { return data_[flat]; }
  const T& operator[](std::size_t flat) const { return data_[flat]; }

  std::size_t Offset(std::initializer_list<std::size_t> index) const {
    std::size_t flat = 0;
    std::size_t axis = 0;
    for (std::size_t i : index) flat = flat * shape_[axis++] + i;
    return flat;
  }
  T& at(std::initializer_list<std::size_t> index) {
    return data_[Offset(index)];
  }
  const T& at(std::initializer_list<std::size_t> index) const {
    return data_[Offset(index)];
  }

  // Sub-tensor obtained by fixing the leading index; copies.
  Tensor Slice(std::size_t leading) const {
    Shape inner(shape_.begin() + 1, shape_.end());
    const std::size_t n = NumElements(inner);
    return Tensor(inner, std::vector<T>(data_.begin() + leading * n,
                                        data_.begin() + (leading + 1) * n));
  }

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  Shape shape_;
  std::vector<T> data_;
};

using TensorF = Tensor<float>;
using TensorD = Tensor<double>;

// H x W x R class-conditional visual evidence.
using EvidenceTensor = TensorF;
// H x W accumulated votes.
using PresenceMap = TensorF;
// H x W x D backbone features.
using FeatureMap = TensorF;

// Stacks equally-shaped tensors along a new leading axis.
template <typename T>
Tensor<T> Stack(std::span<const Tensor<T>> parts) {
  if (parts.empty()) {
    throw Error(ErrorCode::kShapeMismatch, "cannot stack zero tensors");
  }
  Shape shape = parts.front().shape();
  std::vector<T> data;
  data.reserve(parts.size() * parts.front().size());
  for (const auto& part : parts) {
    if (part.shape() != shape) {
      throw Error(ErrorCode::kShapeMismatch,
                  "stack operands differ: " + ShapeString(shape) + " vs " +
                      ShapeString(part.shape()));
    }
    data.insert(data.end(), part.values().begin(), part.values().end());
  }
  shape.insert(shape.begin(), parts.size());
  return Tensor<T>(std::move(shape), std::move(data));
}

}  // namespace houghvote

#endif  // HOUGHVOTE_TENSOR_H_
