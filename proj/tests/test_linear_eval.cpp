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

#include <sstream>

#include "privkit/linear_eval.hpp"
#include "privkit/rng.hpp"

using namespace privkit;
using Index = privkit::index;

TEST_CASE("loss_report with nothing removed leaves losses unchanged") {
  const LabeledDataset ds = gen_toy(60, 4, 21);
  const LossReport r = loss_report(ds, RemovalSet::empty(4));
  REQUIRE(r.labels.size() == 1);
  CHECK(r.labels[0].loss_before == r.labels[0].loss_after);
  CHECK(r.budget_used == 0.0);
}

TEST_CASE("private-label loss is non-decreasing in the removal set") {
  const LabeledDataset ds = gen_toy(60, 5, 22);
  double prev = loss_report(ds, RemovalSet::empty(5)).labels[0].loss_after;
  std::vector<Index> removed;
  for (Index j = 0; j < 5; ++j) {
    removed.push_back(j);
    const double cur =
        loss_report(ds, RemovalSet::of(removed, 5)).labels[0].loss_after;
    CHECK(cur >= prev - 1e-9);
    prev = cur;
  }
}

TEST_CASE("loss_report records budget accounting") {
  const LabeledDataset ds = gen_toy(30, 4, 23);
  const RemovalSet r = RemovalSet::of({1, 2}, 4);
  const LossReport rep = loss_report(ds, r, 5.0);
  CHECK(rep.budget == 5.0);
  CHECK(rep.budget_used ==
        doctest::Approx(removal_cost(ds.X, r)).epsilon(1e-12));
  CHECK(rep.removal_order == std::vector<Index>{1, 2});
}

TEST_CASE("ratio experiment with one feature is trivially optimal") {
  const std::vector<Index> ns{1};
  const std::vector<Index> ms{10, 50, 200};
  const RatioCurve c = ratio_experiment(ns, ms, 20, 0.5, 31);
  REQUIRE(c.cells.size() == 3);
  for (const auto& cell : c.cells) {
    CHECK(cell.match_fraction == 1.0);
  }
}

TEST_CASE("ratio experiment is deterministic including CSV bytes") {
  const std::vector<Index> ns{3};
  const std::vector<Index> ms{10, 40};
  const RatioCurve a = ratio_experiment(ns, ms, 5, 0.3, 7);
  const RatioCurve b = ratio_experiment(ns, ms, 5, 0.3, 7);
  std::ostringstream sa, sb;
  write_csv(a, sa);
  write_csv(b, sb);
  CHECK(sa.str() == sb.str());
  CHECK(sa.str().find("n,m,match_fraction") == 0);
}

TEST_CASE("ratio experiment fractions live in [0,1] and count trials") {
  const std::vector<Index> ns{2, 3};
  const std::vector<Index> ms{15};
  const RatioCurve c = ratio_experiment(ns, ms, 8, 0.3, 5);
  REQUIRE(c.cells.size() == 2);
  for (const auto& cell : c.cells) {
    CHECK(cell.trials == 8);
    CHECK(cell.match_fraction >= 0.0);
    CHECK(cell.match_fraction <= 1.0);
    CHECK(cell.set_match_fraction <= cell.match_fraction + 1e-12);
  }
}

TEST_CASE("utilities_match applies a relative tolerance") {
  CHECK(utilities_match(1.0, 1.0 + 5e-10));
  CHECK(!utilities_match(1.0, 1.0 + 5e-9));
  CHECK(utilities_match(0.0, 0.0));
}

TEST_CASE("loss report CSV shape") {
  const LabeledDataset ds = gen_toy(20, 3, 41);
  const LossReport rep = loss_report(ds, RemovalSet::of({2}, 3), 1.0);
  std::ostringstream out;
  write_csv(rep, ds.feature_names, out);
  const std::string s = out.str();
  CHECK(s.find("label,role,loss_before,loss_after") == 0);
  CHECK(s.find("removal_order,f2") != std::string::npos);
}
