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

#include <doctest.h>

#include "oracles.hpp"
#include "privkit/linalg.hpp"
#include "privkit/rng.hpp"

using namespace privkit;
using Index = privkit::index;

namespace {

Matrix random_matrix(Index rows, Index cols, Rng& rng) {
  Matrix M(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) M(i, j) = rng.uniform(-1.0, 1.0);
  }
  return M;
}

}  // namespace

TEST_CASE("pinv of a scalar matrix is the scalar inverse") {
  const Matrix M = make_matrix(1, 1, std::vector<double>{2.0});
  const Matrix P = pinv(M);
  CHECK(P.rows() == 1);
  CHECK(P(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("pinv of a zero matrix is the transposed zero matrix") {
  const Matrix M = Matrix::Zero(2, 3);
  const Matrix P = pinv(M);
  CHECK(P.rows() == 3);
  CHECK(P.cols() == 2);
  CHECK(P.norm() == 0.0);
}

TEST_CASE("an orthogonal projector is its own pseudoinverse") {
  const Matrix M = make_matrix(2, 2, std::vector<double>{1, 0, 0, 0});
  const Matrix P = pinv(M);
  CHECK((P - M).norm() < 1e-12);
}

TEST_CASE("pinv rejects non-finite input") {
  Matrix M(1, 1);
  M(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(pinv(M), NumericError);
}

TEST_CASE("pinv of empty-shaped matrices") {
  CHECK(pinv(Matrix(0, 3)).rows() == 3);
  CHECK(pinv(Matrix(3, 0)).cols() == 3);
}

TEST_CASE("Penrose conditions hold on random matrices") {
  Rng rng(11);
  for (int t = 0; t < 200; ++t) {
    const Index rows = 1 + static_cast<Index>(rng.below(12));
    const Index cols = 1 + static_cast<Index>(rng.below(12));
    const Matrix M = random_matrix(rows, cols, rng);
    const Matrix P = pinv(M);
    CHECK((M * P * M - M).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((P * M * P - P).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(((M * P).transpose() - M * P).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(((P * M).transpose() - P * M).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("pinv with rank tolerance drops small singular directions") {
  // diag(1, 1e-12): with tol above 1e-12 the tiny direction must vanish
  const Matrix M = make_matrix(2, 2, std::vector<double>{1, 0, 0, 1e-12});
  const Matrix P = pinv(M, 1e-6);
  CHECK(P(0, 0) == doctest::Approx(1.0));
  CHECK(P(1, 1) == 0.0);
}

TEST_CASE("residual of projection onto the ones vector is the demeaned y") {
  const Matrix X = make_matrix(2, 1, std::vector<double>{1, 1});
  const Vector y = make_vector(std::vector<double>{1, 3});
  const Residual r = residual(X, y);
  // independent oracle: projection onto ones = mean
  const auto ref = oracle::lstsq_residual({{1}, {1}}, {1, 3});
  CHECK(r.res(0) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(r.res(1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.norm == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(r.norm == doctest::Approx(ref.norm).epsilon(1e-12));
}

TEST_CASE("residual against a full column space is zero") {
  const Matrix X = Matrix::Identity(2, 2);
  const Vector y = make_vector(std::vector<double>{5, 7});
  const Residual r = residual(X, y);
  CHECK(r.norm == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("residual with zero columns returns y itself") {
  const Matrix X(2, 0);
  const Vector y = make_vector(std::vector<double>{3, 4});
  const Residual r = residual(X, y);
  CHECK(r.norm == doctest::Approx(5.0).epsilon(1e-12));
  CHECK((r.res - y).norm() == 0.0);
}

TEST_CASE("residual rejects mismatched dimensions") {
  const Matrix X(3, 2);
  const Vector y = Vector::Zero(2);
  CHECK_THROWS_AS(residual(X, y), DimensionError);
}

TEST_CASE("residual is orthogonal to every column and contracts the norm") {
  Rng rng(23);
  for (int t = 0; t < 100; ++t) {
    const Index m = 2 + static_cast<Index>(rng.below(10));
    const Index n = 1 + static_cast<Index>(rng.below(6));
    const Matrix X = random_matrix(m, n, rng);
    Vector y(m);
    for (Index i = 0; i < m; ++i) y(i) = rng.uniform(-1.0, 1.0);
    const Residual r = residual(X, y);
    for (Index j = 0; j < n; ++j) {
      const double dot = std::abs(X.col(j).dot(r.res));
      CHECK(dot <= 1e-8 * X.col(j).norm() * r.norm + 1e-12);
    }
    CHECK(r.norm <= y.norm() + 1e-12);
  }
}

TEST_CASE("residual matches the normal-equations oracle on random instances") {
  Rng rng(37);
  for (int t = 0; t < 50; ++t) {
    const Index m = 4 + static_cast<Index>(rng.below(8));
    const Index n = 1 + static_cast<Index>(rng.below(3));
    const Matrix X = random_matrix(m, n, rng);
    oracle::Mat Xo(static_cast<std::size_t>(m),
                   std::vector<double>(static_cast<std::size_t>(n)));
    std::vector<double> yo(static_cast<std::size_t>(m));
    Vector y(m);
    for (Index i = 0; i < m; ++i) {
      y(i) = rng.uniform(-1.0, 1.0);
      yo[static_cast<std::size_t>(i)] = y(i);
      for (Index j = 0; j < n; ++j) {
        Xo[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = X(i, j);
      }
    }
    const Residual r = residual(X, y);
    const auto ref = oracle::lstsq_residual(Xo, yo);
    CHECK(r.norm == doctest::Approx(ref.norm).epsilon(1e-8));
  }
}

TEST_CASE("frob_sq") {
  CHECK(frob_sq(make_matrix(1, 2, std::vector<double>{3, 4})) == 25.0);
  CHECK(frob_sq(Matrix::Zero(3, 3)) == 0.0);
  CHECK(frob_sq(Matrix::Ones(2, 2)) == 4.0);
}

TEST_CASE("make_matrix validates size") {
  CHECK_THROWS_AS(make_matrix(2, 2, std::vector<double>{1, 2, 3}),
                  DimensionError);
}
