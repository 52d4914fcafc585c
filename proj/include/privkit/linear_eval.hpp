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

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "privkit/dataset.hpp"
#include "privkit/linear_privatizer.hpp"

namespace privkit {

/// Before/after in-sample mean squared residual of the best linear predictor,
/// per label.
struct LabelLoss {
  std::string name;
  LabelRole role = LabelRole::kPublic;
  double loss_before = 0.0;
  double loss_after = 0.0;
};

struct LossReport {
  std::vector<LabelLoss> labels;
  std::vector<index> removal_order;
  double budget_used = 0.0;  // removal_cost of R
  double budget = 0.0;       // D under which R was chosen, when known
};

LossReport loss_report(const LabeledDataset& ds, const RemovalSet& R,
                       double budget = 0.0);

/// Fraction of toy trials where greedy matched the brute-force optimum, per
/// (n, m) grid cell. Utility match (1e-9 relative) is the headline number;
/// exact set match rides along for information.
struct RatioCell {
  index n = 0;
  index m = 0;
  double match_fraction = 0.0;
  double set_match_fraction = 0.0;
  int trials = 0;
};

struct RatioCurve {
  std::vector<RatioCell> cells;
  int trials = 0;
  double alpha = 0.0;
  std::uint64_t seed = 0;
};

/// Runs `trials` independent gen_toy instances per (n, m) cell with budget
/// D = alpha * frob_sq(X). Each trial derives its own sub-seed from
/// (seed, n, m, trial), so results are schedule-independent.
RatioCurve ratio_experiment(std::span<const index> n_values,
                            std::span<const index> m_values, int trials,
                            double alpha, std::uint64_t seed);

/// Utility-match predicate shared by ratio_experiment and its tests.
bool utilities_match(double brute_utility, double greedy_utility);

void write_csv(const RatioCurve& curve, std::ostream& out);
void write_csv(const LossReport& report,
               const std::vector<std::string>& feature_names,
               std::ostream& out);

}  // namespace privkit
