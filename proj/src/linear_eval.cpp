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

#include "privkit/linear_eval.hpp"

#include <cmath>
#include <ostream>

#include "privkit/csv.hpp"
#include "privkit/rng.hpp"

namespace privkit {

namespace {

double mean_sq_residual(const Matrix& X, const Vector& y, const RemovalSet& R) {
  const double norm = adversary_loss(X, y, R);
  return norm * norm / static_cast<double>(X.rows());
}

}  // namespace

LossReport loss_report(const LabeledDataset& ds, const RemovalSet& R,
                       double budget) {
  LossReport report;
  report.removal_order = R.removed;
  report.budget_used = removal_cost(ds.X, R);
  report.budget = budget;
  const RemovalSet none = RemovalSet::empty(ds.n());
  for (const auto& name : ds.label_names) {
    const Vector& y = ds.label(name);
    LabelLoss ll;
    ll.name = name;
    ll.role = ds.role(name);
    ll.loss_before = mean_sq_residual(ds.X, y, none);
    ll.loss_after = mean_sq_residual(ds.X, y, R);
    report.labels.push_back(std::move(ll));
  }
  return report;
}

bool utilities_match(double brute_utility, double greedy_utility) {
  return std::abs(brute_utility - greedy_utility) <=
         1e-9 * std::max(1.0, std::abs(brute_utility));
}

RatioCurve ratio_experiment(std::span<const index> n_values,
                            std::span<const index> m_values, int trials,
                            double alpha, std::uint64_t seed) {
  RatioCurve curve;
  curve.trials = trials;
  curve.alpha = alpha;
  curve.seed = seed;
  const Rng root(seed);
  for (const index n : n_values) {
    if (n > 20) throw ConfigError("ratio_experiment: n exceeds brute guard");
    for (const index m : m_values) {
      int matches = 0;
      int set_matches = 0;
      const Rng cell = root.substream("ratio")
                           .substream(static_cast<std::uint64_t>(n))
                           .substream(static_cast<std::uint64_t>(m));
      for (int t = 0; t < trials; ++t) {
        const std::uint64_t sub =
            cell.substream(static_cast<std::uint64_t>(t)).seed();
        const LabeledDataset ds = gen_toy(m, n, sub);
        const Vector& y = ds.label("target");
        const Budget D{alpha * frob_sq(ds.X)};
        const auto [greedy_set, trace] = greedy_approx(ds.X, y, D);
        const double greedy_u = adversary_loss(ds.X, y, greedy_set);
        const BruteResult brute = brute_force(ds.X, y, D);
        if (utilities_match(brute.utility, greedy_u)) ++matches;
        if (brute.removal.sorted_removed() == greedy_set.sorted_removed()) {
          ++set_matches;
        }
      }
      RatioCell c;
      c.n = n;
      c.m = m;
      c.trials = trials;
      c.match_fraction = trials ? static_cast<double>(matches) / trials : 0.0;
      c.set_match_fraction =
          trials ? static_cast<double>(set_matches) / trials : 0.0;
      curve.cells.push_back(c);
    }
  }
  return curve;
}

void write_csv(const RatioCurve& curve, std::ostream& out) {
  csv::Writer w(out);
  w.row({"n", "m", "match_fraction", "set_match_fraction", "trials"});
  for (const auto& c : curve.cells) {
    w.row({std::to_string(c.n), std::to_string(c.m),
           csv::format_double(c.match_fraction),
           csv::format_double(c.set_match_fraction), std::to_string(c.trials)});
  }
}

void write_csv(const LossReport& report,
               const std::vector<std::string>& feature_names,
               std::ostream& out) {
  csv::Writer w(out);
  w.row({"label", "role", "loss_before", "loss_after"});
  for (const auto& ll : report.labels) {
    w.row({ll.name, to_string(ll.role), csv::format_double(ll.loss_before),
           csv::format_double(ll.loss_after)});
  }
  std::vector<std::string> order{"removal_order"};
  for (const index j : report.removal_order) {
    order.push_back(feature_names.empty()
                        ? std::to_string(j)
                        : feature_names.at(static_cast<std::size_t>(j)));
  }
  w.row(order);
  w.row({"budget_used", csv::format_double(report.budget_used)});
  w.row({"budget", csv::format_double(report.budget)});
}

}  // namespace privkit
