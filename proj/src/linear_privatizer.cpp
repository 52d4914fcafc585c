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

#include "privkit/linear_privatizer.hpp"

#include <algorithm>
#include <limits>

namespace privkit {

RemovalSet RemovalSet::of(std::vector<index> removed, index n) {
  if (n < 0) throw DimensionError("RemovalSet: negative n");
  std::vector<bool> in_r(static_cast<std::size_t>(n), false);
  for (const index j : removed) {
    if (j < 0 || j >= n) throw DimensionError("RemovalSet: index out of range");
    if (in_r[static_cast<std::size_t>(j)]) {
      throw DimensionError("RemovalSet: duplicate index");
    }
    in_r[static_cast<std::size_t>(j)] = true;
  }
  RemovalSet r;
  r.removed = std::move(removed);
  r.n = n;
  for (index j = 0; j < n; ++j) {
    if (!in_r[static_cast<std::size_t>(j)]) r.kept.push_back(j);
  }
  return r;
}

RemovalSet RemovalSet::all(index n) {
  std::vector<index> everything(static_cast<std::size_t>(n));
  for (index j = 0; j < n; ++j) everything[static_cast<std::size_t>(j)] = j;
  return of(std::move(everything), n);
}

bool RemovalSet::is_removed(index j) const {
  return std::find(removed.begin(), removed.end(), j) != removed.end();
}

std::vector<index> RemovalSet::sorted_removed() const {
  std::vector<index> s = removed;
  std::sort(s.begin(), s.end());
  return s;
}

namespace {

Matrix kept_columns(const Matrix& X, const std::vector<index>& kept) {
  Matrix S(X.rows(), static_cast<index>(kept.size()));
  for (std::size_t j = 0; j < kept.size(); ++j) {
    S.col(static_cast<index>(j)) = X.col(kept[j]);
  }
  return S;
}

// Residual norm of y against the columns listed in `kept`.
double kept_residual_norm(const Matrix& X, const Vector& y,
                          const std::vector<index>& kept) {
  if (kept.empty()) return y.norm();
  return residual(kept_columns(X, kept), y).norm;
}

std::vector<double> column_sq(const Matrix& X) {
  std::vector<double> c(static_cast<std::size_t>(X.cols()));
  for (index j = 0; j < X.cols(); ++j) {
    c[static_cast<std::size_t>(j)] = X.col(j).squaredNorm();
  }
  return c;
}

}  // namespace

double adversary_loss(const Matrix& X, const Vector& y, const RemovalSet& R) {
  if (R.n != X.cols()) throw DimensionError("adversary_loss: R.n != X.cols");
  if (X.rows() != y.size()) throw DimensionError("adversary_loss: X.rows != y.len");
  return kept_residual_norm(X, y, R.kept);
}

double removal_cost(const Matrix& X, const RemovalSet& R) {
  double c = 0.0;
  for (const index j : R.removed) c += X.col(j).squaredNorm();
  return c;
}

std::pair<RemovalSet, GreedyTrace> greedy_approx(const Matrix& X,
                                                 const Vector& y,
                                                 Budget budget) {
  if (X.rows() != y.size()) throw DimensionError("greedy_approx: X.rows != y.len");
  if (budget.D < 0) throw ConfigError("greedy_approx: negative budget");
  const index n = X.cols();
  const std::vector<double> colsq = column_sq(X);

  std::vector<bool> in_r(static_cast<std::size_t>(n), false);
  std::vector<index> removed;
  std::vector<index> kept;
  double cost_so_far = 0.0;
  GreedyTrace trace;

  while (true) {
    // Find-Next: best utility-per-cost candidate within budget.
    index e_next = -1;
    double best_ratio = -std::numeric_limits<double>::infinity();
    double best_u = 0.0, best_c = 0.0;
    int considered = 0;
    kept.clear();
    for (index j = 0; j < n; ++j) {
      if (!in_r[static_cast<std::size_t>(j)]) kept.push_back(j);
    }
    std::vector<index> kept_minus(kept.size() ? kept.size() - 1 : 0);
    for (index e = 0; e < n; ++e) {
      if (in_r[static_cast<std::size_t>(e)]) continue;
      const double c = cost_so_far + colsq[static_cast<std::size_t>(e)];
      if (c > budget.D) continue;
      ++considered;
      kept_minus.clear();
      for (const index j : kept) {
        if (j != e) kept_minus.push_back(j);
      }
      const double u = kept_residual_norm(X, y, kept_minus);
      const double ratio =
          c == 0.0 ? std::numeric_limits<double>::infinity() : u / c;
      if (ratio > best_ratio) {  // strict: lowest index wins ties
        best_ratio = ratio;
        best_u = u;
        best_c = c;
        e_next = e;
      }
    }
    if (e_next < 0) break;
    in_r[static_cast<std::size_t>(e_next)] = true;
    removed.push_back(e_next);
    cost_so_far = best_c;
    trace.steps.push_back(
        GreedyStep{e_next, best_u, best_c, best_ratio, considered});
  }
  return {RemovalSet::of(std::move(removed), n), std::move(trace)};
}

BruteResult brute_force(const Matrix& X, const Vector& y, Budget budget) {
  if (X.rows() != y.size()) throw DimensionError("brute_force: X.rows != y.len");
  const index n = X.cols();
  if (n > 20) throw ConfigError("brute_force: n exceeds the 2^n guard (20)");
  if (budget.D < 0) throw ConfigError("brute_force: negative budget");
  const std::vector<double> colsq = column_sq(X);

  bool have_best = false;
  double best_u = 0.0, best_c = 0.0;
  std::vector<index> best_set;  // ascending

  std::vector<index> removed, kept;
  const std::uint64_t limit = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < limit; ++mask) {
    double c = 0.0;
    for (index j = 0; j < n; ++j) {
      if (mask >> j & 1) c += colsq[static_cast<std::size_t>(j)];
    }
    if (c > budget.D) continue;
    removed.clear();
    kept.clear();
    for (index j = 0; j < n; ++j) {
      (mask >> j & 1 ? removed : kept).push_back(j);
    }
    const double u = kept_residual_norm(X, y, kept);
    const bool better =
        !have_best || u > best_u ||
        (u == best_u &&
         (c < best_c || (c == best_c && std::lexicographical_compare(
                                            removed.begin(), removed.end(),
                                            best_set.begin(), best_set.end()))));
    if (better) {
      have_best = true;
      best_u = u;
      best_c = c;
      best_set = removed;
    }
  }
  // mask 0 (remove nothing) always fits any D >= 0, so a best exists.
  return BruteResult{RemovalSet::of(std::move(best_set), n), best_u};
}

Matrix apply_removal(const Matrix& X, const RemovalSet& R) {
  if (R.n != X.cols()) throw DimensionError("apply_removal: R.n != X.cols");
  Matrix out = X;
  for (const index j : R.removed) out.col(j).setZero();
  return out;
}

double compression_objective(const Matrix& X, const Vector& y, const Matrix& A) {
  if (A.rows() != X.cols()) {
    throw DimensionError("compression_objective: A.rows != X.cols");
  }
  if (X.rows() != y.size()) {
    throw DimensionError("compression_objective: X.rows != y.len");
  }
  const Matrix compressed = X * (A * pinv(A));        // X A A+
  const Eigen::RowVectorXd yt_b = y.transpose() * compressed;
  const Eigen::RowVectorXd row = yt_b * pinv(compressed);
  return row.squaredNorm();
}

double reduced_target(const Matrix& X, const Vector& theta, const RemovalSet& R) {
  if (theta.size() != X.cols()) {
    throw DimensionError("reduced_target: theta.len != X.cols");
  }
  if (R.n != X.cols()) throw DimensionError("reduced_target: R.n != X.cols");
  if (R.removed.empty()) return 0.0;

  const std::vector<index> removed = R.sorted_removed();
  Matrix Xr(X.rows(), static_cast<index>(removed.size()));
  Vector theta_r(static_cast<index>(removed.size()));
  for (std::size_t j = 0; j < removed.size(); ++j) {
    Xr.col(static_cast<index>(j)) = X.col(removed[j]);
    theta_r(static_cast<index>(j)) = theta(removed[j]);
  }
  if (R.kept.empty()) {
    return (Xr * theta_r).squaredNorm();
  }
  const Matrix Xs = kept_columns(X, R.kept);
  const Matrix proj = Xs * (pinv(Xs) * Xr);  // X_S X_S+ X_R
  return ((Xr - proj) * theta_r).squaredNorm();
}

}  // namespace privkit
