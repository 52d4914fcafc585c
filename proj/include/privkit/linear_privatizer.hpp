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

#include <utility>
#include <vector>

#include "privkit/linalg.hpp"

namespace privkit {

/// Partition of the feature columns into a removed set R and its kept
/// complement S.
struct RemovalSet {
  std::vector<index> removed;  // in removal order
  std::vector<index> kept;     // ascending
  index n = 0;

  /// Validates indices and fills in the complement.
  static RemovalSet of(std::vector<index> removed, index n);
  static RemovalSet empty(index n) { return of({}, n); }
  static RemovalSet all(index n);
  bool is_removed(index j) const;
  /// Removal indices in ascending order (for comparisons).
  std::vector<index> sorted_removed() const;
};

/// Squared-Frobenius distortion budget.
struct Budget {
  double D = 0.0;
};

struct GreedyStep {
  index chosen = -1;
  double utility = 0.0;  // adversary residual norm after taking the step
  double cost = 0.0;     // cumulative removal cost including this step
  double ratio = 0.0;    // utility per unit cost (+inf when cost is 0)
  int candidates_considered = 0;  // feasible candidates scored this step
};

struct GreedyTrace {
  std::vector<GreedyStep> steps;
};

/// Best linear adversary's residual using only the kept features:
/// || (I - X_S X_S+) y ||_2. Removing every feature leaves ||y||_2.
double adversary_loss(const Matrix& X, const Vector& y, const RemovalSet& R);

/// Squared Frobenius norm of the removed columns.
double removal_cost(const Matrix& X, const RemovalSet& R);

/// Greedy approximation: repeatedly add the feasible feature with the best
/// utility-per-cost ratio until no candidate fits the budget. Ties and
/// zero-cost candidates resolve to the lowest feature index.
std::pair<RemovalSet, GreedyTrace> greedy_approx(const Matrix& X,
                                                 const Vector& y, Budget budget);

struct BruteResult {
  RemovalSet removal;
  double utility = 0.0;
};

/// Exhaustive optimum over all 2^n subsets within budget. Ties break toward
/// smaller cost, then the lexicographically smallest set. Guarded at n <= 20.
BruteResult brute_force(const Matrix& X, const Vector& y, Budget budget);

/// Privatized data: removed columns zeroed. The distortion identity
/// ||X - apply_removal(X,R)||_F^2 == removal_cost(X,R) holds exactly.
Matrix apply_removal(const Matrix& X, const RemovalSet& R);

/// General compression-matrix objective || y^T (X A A+)(X A A+)+ ||^2 for a
/// given A (evaluation only).
double compression_objective(const Matrix& X, const Vector& y, const Matrix& A);

/// Closed form || (X_R - X_S X_S+ X_R) theta_R ||^2, equal to
/// adversary_loss^2 whenever y = X theta exactly.
double reduced_target(const Matrix& X, const Vector& theta, const RemovalSet& R);

}  // namespace privkit
