// Copyright 2026 The privkit Authors
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

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "privkit/errors.hpp"

namespace privkit::nn {

using index = std::int64_t;

/// Dense row-major tensor of doubles. Image batches are NHWC
/// (batch, height, width, channels); feature batches are (batch, features).
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<index> dims)
      : dims_(std::move(dims)), data_(checked_size(dims_), 0.0) {}

  static Tensor zeros(std::vector<index> dims) { return Tensor(std::move(dims)); }

  const std::vector<index>& dims() const { return dims_; }
  index dim(std::size_t i) const { return dims_.at(i); }
  index size() const { return static_cast<index>(data_.size()); }
  index rank() const { return static_cast<index>(dims_.size()); }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  double& operator[](index i) { return data_[static_cast<std::size_t>(i)]; }
  double operator[](index i) const { return data_[static_cast<std::size_t>(i)]; }
  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

  /// Same data, new dims; element count must match.
  Tensor reshaped(std::vector<index> dims) const {
    Tensor t = *this;
    if (checked_size(dims) != data_.size()) {
      throw DimensionError("Tensor::reshaped: element count mismatch");
    }
    t.dims_ = std::move(dims);
    return t;
  }

  bool same_dims(const Tensor& other) const { return dims_ == other.dims_; }

  void fill(double v) { std::fill(data_.begin(), data_.end(), v); }

  double squared_norm() const {
    double s = 0.0;
    for (const double v : data_) s += v * v;
    return s;
  }

  bool all_finite() const {
    for (const double v : data_) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  }

 private:
  static std::size_t checked_size(const std::vector<index>& dims) {
    if (dims.empty()) return 0;  // rank-0: the empty tensor
    index n = 1;
    for (const index d : dims) {
      if (d < 0) throw DimensionError("Tensor: negative dimension");
      n *= d;
    }
    return static_cast<std::size_t>(n);
  }

  std::vector<index> dims_;
  std::vector<double> data_;
};

using RowMat =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatMap = Eigen::Map<RowMat>;
using ConstMatMap = Eigen::Map<const RowMat>;

/// Views tensor data as a rows x cols row-major matrix.
inline MatMap as_matrix(Tensor& t, index rows, index cols) {
  if (rows * cols != t.size()) {
    throw DimensionError("as_matrix: element count mismatch");
  }
  return MatMap(t.data(), rows, cols);
}

inline ConstMatMap as_matrix(const Tensor& t, index rows, index cols) {
  if (rows * cols != t.size()) {
    throw DimensionError("as_matrix: element count mismatch");
  }
  return ConstMatMap(t.data(), rows, cols);
}

}  // namespace privkit::nn
