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
#include "privkit/dataset.hpp"
#include "privkit/linear_privatizer.hpp"
#include "privkit/rng.hpp"

using namespace privkit;
using Index = privkit::index;

namespace {

Matrix random_matrix(Index rows, Index cols, Rng& rng) {
  Matrix M(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) M(i, j) = rng.uniform();
  }
  return M;
}

Vector random_vector(Index len, Rng& rng) {
  Vector v(len);
  for (Index i = 0; i < len; ++i) v(i) = rng.uniform();
  return v;
}

}  // namespace

TEST_CASE("RemovalSet validates and complements") {
  const RemovalSet r = RemovalSet::of({2, 0}, 4);
  CHECK(r.kept == std::vector<Index>{1, 3});
  CHECK(r.is_removed(0));
  CHECK(!r.is_removed(1));
  CHECK(r.sorted_removed() == std::vector<Index>{0, 2});
  CHECK_THROWS_AS(RemovalSet::of({4}, 4), DimensionError);
  CHECK_THROWS_AS(RemovalSet::of({1, 1}, 4), DimensionError);
}

TEST_CASE("adversary_loss with nothing removed and y in span is zero") {
  Rng rng(101);
  const Matrix X = random_matrix(20, 4, rng);
  const Vector theta = random_vector(4, rng);
  const Vector y = X * theta;
  CHECK(adversary_loss(X, y, RemovalSet::empty(4)) < 1e-10);
}

TEST_CASE("adversary_loss with everything removed equals the norm of y") {
  Rng rng(102);
  const Matrix X = random_matrix(10, 3, rng);
  const Vector y = random_vector(10, rng);
  CHECK(adversary_loss(X, y, RemovalSet::all(3)) ==
        doctest::Approx(y.norm()).epsilon(1e-12));
}

TEST_CASE("adversary_loss agrees with the hand normal-equations oracle") {
  // X = [[1,0],[0,1],[1,1]], y = (1,0,1)
  const Matrix X = make_matrix(3, 2, std::vector<double>{1, 0, 0, 1, 1, 1});
  const Vector y = make_vector(std::vector<double>{1, 0, 1});

  // remove feature 1: kept column (1,0,1); oracle fixes the value
  const auto ref_r1 = oracle::lstsq_residual({{1}, {0}, {1}}, {1, 0, 1});
  CHECK(adversary_loss(X, y, RemovalSet::of({1}, 2)) ==
        doctest::Approx(ref_r1.norm).epsilon(1e-9));
  CHECK(ref_r1.norm == doctest::Approx(0.0));  // y is exactly that column

  // remove feature 0: kept column (0,1,1); beta = 1/2, res = (1,-1/2,1/2)
  const auto ref_r0 = oracle::lstsq_residual({{0}, {1}, {1}}, {1, 0, 1});
  CHECK(ref_r0.norm == doctest::Approx(std::sqrt(1.5)).epsilon(1e-12));
  CHECK(adversary_loss(X, y, RemovalSet::of({0}, 2)) ==
        doctest::Approx(ref_r0.norm).epsilon(1e-9));
}

TEST_CASE("removal_cost basics and additivity") {
  Rng rng(103);
  const Matrix X = random_matrix(8, 5, rng);
  CHECK(removal_cost(X, RemovalSet::empty(5)) == 0.0);
  CHECK(removal_cost(X, RemovalSet::of({2}, 5)) ==
        doctest::Approx(X.col(2).squaredNorm()).epsilon(1e-12));
  const double c01 = removal_cost(X, RemovalSet::of({0, 1}, 5));
  const double c0 = removal_cost(X, RemovalSet::of({0}, 5));
  const double c1 = removal_cost(X, RemovalSet::of({1}, 5));
  CHECK(c01 == doctest::Approx(c0 + c1).epsilon(1e-12));
}

TEST_CASE("greedy with zero budget and no free columns removes nothing") {
  Rng rng(104);
  const Matrix X = random_matrix(10, 4, rng);
  const Vector y = random_vector(10, rng);
  const auto [r, trace] = greedy_approx(X, y, Budget{0.0});
  CHECK(r.removed.empty());
  CHECK(trace.steps.empty());
}

TEST_CASE("greedy removes a zero-cost column even under a zero budget") {
  Matrix X = make_matrix(3, 3,
                         std::vector<double>{1, 0, 2, 1, 0, 3, 1, 0, 4});
  const Vector y = make_vector(std::vector<double>{1, 2, 3});
  const auto [r, trace] = greedy_approx(X, y, Budget{0.0});
  CHECK(r.removed == std::vector<Index>{1});
  CHECK(trace.steps.size() == 1);
  CHECK(trace.steps[0].cost == 0.0);
  CHECK(std::isinf(trace.steps[0].ratio));
}

TEST_CASE("greedy result always satisfies the budget and trace invariants") {
  Rng rng(105);
  for (int t = 0; t < 100; ++t) {
    const Index m = 5 + static_cast<Index>(rng.below(40));
    const Index n = 2 + static_cast<Index>(rng.below(5));
    const Matrix X = random_matrix(m, n, rng);
    const Vector y = random_vector(m, rng);
    const double D = 0.3 * frob_sq(X);
    const auto [r, trace] = greedy_approx(X, y, Budget{D});
    CHECK(removal_cost(X, r) <= D + 1e-12);
    double prev_cost = 0.0;
    double prev_utility = 0.0;
    for (const auto& s : trace.steps) {
      CHECK(s.cost >= prev_cost - 1e-12);
      CHECK(s.cost <= D + 1e-12);
      CHECK(s.utility >= prev_utility - 1e-9);  // monotone along the path
      prev_cost = s.cost;
      prev_utility = s.utility;
      CHECK(s.candidates_considered >= 1);
    }
  }
}

TEST_CASE("brute force base cases") {
  Rng rng(106);
  const Matrix X = random_matrix(12, 4, rng);
  const Vector y = random_vector(12, rng);

  const BruteResult all = brute_force(X, y, Budget{frob_sq(X) + 1.0});
  CHECK(all.removal.removed.size() == 4);
  CHECK(all.utility == doctest::Approx(y.norm()).epsilon(1e-12));

  const BruteResult none = brute_force(X, y, Budget{0.0});
  CHECK(none.removal.removed.empty());

  Matrix wide(2, 21);
  wide.setZero();
  CHECK_THROWS_AS(brute_force(wide, Vector::Zero(2), Budget{1.0}), ConfigError);
}

TEST_CASE("brute force dominates greedy on random instances") {
  Rng rng(107);
  for (int t = 0; t < 100; ++t) {
    const Matrix X = random_matrix(100, 5, rng);
    const Vector y = random_vector(100, rng);
    const double D = 0.3 * frob_sq(X);
    const auto [gr, trace] = greedy_approx(X, y, Budget{D});
    const double gu = adversary_loss(X, y, gr);
    const BruteResult br = brute_force(X, y, Budget{D});
    CHECK(br.utility >= gu - 1e-9);
    CHECK(removal_cost(X, br.removal) <= D + 1e-12);
  }
}

TEST_CASE("brute force utility is monotone in the budget") {
  Rng rng(108);
  const Matrix X = random_matrix(30, 5, rng);
  const Vector y = random_vector(30, rng);
  double prev = -1.0;
  for (const double alpha : {0.0, 0.1, 0.2, 0.4, 0.6, 0.8, 1.0}) {
    const BruteResult r = brute_force(X, y, Budget{alpha * frob_sq(X)});
    CHECK(r.utility >= prev - 1e-12);
    prev = r.utility;
  }
}

TEST_CASE("adversary loss is monotone under nested removal sets") {
  Rng rng(109);
  for (int t = 0; t < 1000; ++t) {
    const Index m = 4 + static_cast<Index>(rng.below(20));
    const Index n = 2 + static_cast<Index>(rng.below(5));
    const Matrix X = random_matrix(m, n, rng);
    const Vector y = random_vector(m, rng);
    // random nested pair R subset R'
    std::vector<Index> big, small;
    for (Index j = 0; j < n; ++j) {
      const auto draw = rng.below(3);
      if (draw >= 1) big.push_back(j);
      if (draw == 2) small.push_back(j);
    }
    const double lo = adversary_loss(X, y, RemovalSet::of(small, n));
    const double hi = adversary_loss(X, y, RemovalSet::of(big, n));
    CHECK(hi >= lo - 1e-9);
  }
}

TEST_CASE("apply_removal zeroes columns and satisfies the distortion identity") {
  Rng rng(110);
  const Matrix X = random_matrix(9, 4, rng);
  CHECK(apply_removal(X, RemovalSet::empty(4)) == X);
  CHECK(apply_removal(X, RemovalSet::all(4)).norm() == 0.0);
  const RemovalSet r = RemovalSet::of({1, 3}, 4);
  const Matrix priv = apply_removal(X, r);
  CHECK(frob_sq(X - priv) == doctest::Approx(removal_cost(X, r)).epsilon(1e-12));
}

TEST_CASE("compression objective special cases") {
  Rng rng(111);
  const Matrix X = random_matrix(6, 3, rng);
  const Vector y = random_vector(6, rng);

  // A = 0 gives a zero objective
  CHECK(compression_objective(X, y, Matrix::Zero(3, 2)) == 0.0);

  // A = I: objective is the squared norm of the projection of y onto col(X)
  const double obj = compression_objective(X, y, Matrix::Identity(3, 3));
  const double res = adversary_loss(X, y, RemovalSet::empty(3));
  CHECK(obj + res * res == doctest::Approx(y.squaredNorm()).epsilon(1e-9));
}

TEST_CASE("compression objective matches adversary_loss via Pythagoras") {
  Rng rng(112);
  for (int t = 0; t < 50; ++t) {
    const Matrix X = random_matrix(6, 3, rng);
    const Vector y = random_vector(6, rng);
    // selector of kept columns S = {0, 2}
    Matrix A = Matrix::Zero(3, 2);
    A(0, 0) = 1.0;
    A(2, 1) = 1.0;
    const double obj = compression_objective(X, y, A);
    const double loss = adversary_loss(X, y, RemovalSet::of({1}, 3));
    CHECK(obj + loss * loss == doctest::Approx(y.squaredNorm()).epsilon(1e-9));
  }
}

TEST_CASE("reduced target equals squared adversary loss for y = X theta") {
  Rng rng(113);
  CHECK(reduced_target(random_matrix(5, 3, rng), Vector::Ones(3),
                       RemovalSet::empty(3)) == 0.0);

  const Matrix X8 = random_matrix(8, 4, rng);
  const Vector theta8 = random_vector(4, rng);
  const double loss = adversary_loss(X8, X8 * theta8, RemovalSet::of({0, 2}, 4));
  const double rt = reduced_target(X8, theta8, RemovalSet::of({0, 2}, 4));
  CHECK(rt == doctest::Approx(loss * loss).epsilon(1e-9));

  for (int t = 0; t < 100; ++t) {
    const Index m = 4 + static_cast<Index>(rng.below(10));
    const Index n = 2 + static_cast<Index>(rng.below(4));
    const Matrix X = random_matrix(m, n, rng);
    const Vector theta = random_vector(n, rng);
    const Vector y = X * theta;
    std::vector<Index> rem;
    for (Index j = 0; j < n; ++j) {
      if (rng.below(2)) rem.push_back(j);
    }
    const RemovalSet R = RemovalSet::of(rem, n);
    const double l = adversary_loss(X, y, R);
    const double rt2 = reduced_target(X, theta, R);
    CHECK(rt2 == doctest::Approx(l * l).epsilon(1e-9));
  }
}

TEST_CASE("greedy reproduces on a seeded instance") {
  // determinism: identical runs yield identical traces
  const LabeledDataset ds = gen_toy(50, 5, 77);
  const Vector& y = ds.label("target");
  const double D = 0.3 * frob_sq(ds.X);
  const auto [r1, t1] = greedy_approx(ds.X, y, Budget{D});
  const auto [r2, t2] = greedy_approx(ds.X, y, Budget{D});
  CHECK(r1.removed == r2.removed);
  REQUIRE(t1.steps.size() == t2.steps.size());
  for (std::size_t i = 0; i < t1.steps.size(); ++i) {
    CHECK(t1.steps[i].chosen == t2.steps[i].chosen);
    CHECK(t1.steps[i].utility == t2.steps[i].utility);
  }
}
