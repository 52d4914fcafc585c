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

#include "privkit/linalg.hpp"

#include <algorithm>
#include <limits>

namespace privkit {

void check_finite(const Matrix& M, const char* what) {
  if (!M.allFinite()) {
    throw NumericError(std::string(what) + ": non-finite entry");
  }
}

void check_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) {
    throw NumericError(std::string(what) + ": non-finite entry");
  }
}

Matrix make_matrix(index rows, index cols, std::span<const double> row_major) {
  if (static_cast<index>(row_major.size()) != rows * cols) {
    throw DimensionError("make_matrix: data length != rows * cols");
  }
  Matrix M(rows, cols);
  for (index i = 0; i < rows; ++i) {
    for (index j = 0; j < cols; ++j) {
      M(i, j) = row_major[static_cast<std::size_t>(i * cols + j)];
    }
  }
  check_finite(M, "make_matrix");
  return M;
}

Vector make_vector(std::span<const double> values) {
  Vector v(static_cast<index>(values.size()));
  std::copy(values.begin(), values.end(), v.data());
  check_finite(v, "make_vector");
  return v;
}

namespace {

double default_tol(index rows, index cols, double max_sv) {
  return std::numeric_limits<double>::epsilon() *
         static_cast<double>(std::max(rows, cols)) * max_sv;
}

}  // namespace

Matrix pinv(const Matrix& M, double rank_tol) {
  check_finite(M, "pinv");
  if (M.rows() == 0 || M.cols() == 0) {
    return Matrix::Zero(M.cols(), M.rows());
  }
  Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) {
    throw NumericError("pinv: SVD did not converge");
  }
  const Vector& sv = svd.singularValues();
  const double tol = rank_tol >= 0.0
                         ? rank_tol
                         : default_tol(M.rows(), M.cols(), sv.size() ? sv(0) : 0.0);
  Vector inv_sv = Vector::Zero(sv.size());
  for (index i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol) inv_sv(i) = 1.0 / sv(i);
  }
  return svd.matrixV() * inv_sv.asDiagonal() * svd.matrixU().transpose();
}

Residual residual(const Matrix& X, const Vector& y) {
  if (X.rows() != y.size()) {
    throw DimensionError("residual: X.rows != y.len");
  }
  check_finite(X, "residual: X");
  check_finite(y, "residual: y");
  if (X.cols() == 0) {
    return Residual{y, y.norm()};
  }
  Eigen::JacobiSVD<Matrix> svd(X, Eigen::ComputeThinU);
  if (svd.info() != Eigen::Success) {
    throw NumericError("residual: SVD did not converge");
  }
  const Vector& sv = svd.singularValues();
  const double tol = default_tol(X.rows(), X.cols(), sv.size() ? sv(0) : 0.0);
  index rank = 0;
  while (rank < sv.size() && sv(rank) > tol) ++rank;
  // Projection onto the column space is U_r U_r^T with U_r the leading rank
  // columns of the thin U factor.
  const auto U = svd.matrixU().leftCols(rank);
  Vector res = y - U * (U.transpose() * y);
  return Residual{res, res.norm()};
}

double frob_sq(const Matrix& M) { return M.squaredNorm(); }

}  // namespace privkit
