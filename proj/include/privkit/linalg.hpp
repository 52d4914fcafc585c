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
#include <span>

#include "privkit/errors.hpp"

namespace privkit {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using index = Eigen::Index;

/// Throws NumericError if any entry is NaN or infinite.
void check_finite(const Matrix& M, const char* what);
void check_finite(const Vector& v, const char* what);

/// Builds a matrix from row-major data, validating size and finiteness.
Matrix make_matrix(index rows, index cols, std::span<const double> row_major);
Vector make_vector(std::span<const double> values);

/// Moore–Penrose pseudoinverse via SVD. Singular values <= rank_tol are
/// treated as zero. rank_tol < 0 selects the default
/// machine-epsilon * max(rows, cols) * largest singular value.
/// Throws NumericError if the decomposition does not converge.
Matrix pinv(const Matrix& M, double rank_tol = -1.0);

struct Residual {
  Vector res;
  double norm = 0.0;
};

/// Component of y orthogonal to the column space of X, i.e. y - X X+ y,
/// together with its 2-norm. A matrix with zero columns is legal: nothing to
/// project onto, so res = y.
Residual residual(const Matrix& X, const Vector& y);

/// Sum of squared entries.
double frob_sq(const Matrix& M);

}  // namespace privkit
