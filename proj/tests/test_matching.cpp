// Copyright 2026 The seaeval Authors. All Rights Reserved.
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

#include <algorithm>

#include "oracles.hpp"
#include "seaeval/fixtures.hpp"
#include "seaeval/matching.hpp"

using namespace seaeval;

TEST_CASE("greedy_match threshold boundary") {
  // One pred overlapping one gt at IoU 0.6.
  const std::vector<BBox> gts = {{0, 0, 10, 10}};
  const std::vector<BBox> preds = {{0, 0, 10, 6}};
  CHECK(iou(preds[0], gts[0]) == doctest::Approx(0.6));

  const MatchResult at50 = greedy_match(preds, gts, 0.5);
  CHECK(at50.pairs.size() == 1);
  const MatchResult at75 = greedy_match(preds, gts, 0.75);
  CHECK(at75.pairs.empty());
  CHECK(at75.unmatched_preds.size() == 1);
  CHECK(at75.unmatched_gts.size() == 1);
}

TEST_CASE("greedy_match score priority") {
  // Two preds both overlapping one gt; the first (higher score) wins.
  const std::vector<BBox> gts = {{0, 0, 10, 10}};
  const std::vector<BBox> preds = {{1, 1, 10, 10}, {0, 0, 10, 9}};
  const MatchResult m = greedy_match(preds, gts, 0.5);
  REQUIRE(m.pairs.size() == 1);
  CHECK(m.pairs[0].pred == 0);
  CHECK(m.unmatched_preds == std::vector<int>{1});
  // The other assignment order would pick pred 1; enumerate both to confirm
  // the high-score pred owns the gt.
  const double iou0 = iou(preds[0], gts[0]);
  CHECK(m.pairs[0].similarity == doctest::Approx(iou0));
}

TEST_CASE("greedy_match equal-IoU tie goes to the lower gt index") {
  const std::vector<BBox> gts = {{0, 0, 10, 10}, {20, 0, 10, 10}};
  // Pred overlapping both gts identically.
  std::vector<std::vector<double>> m = {{0.7, 0.7}};
  const MatchResult r = greedy_match_matrix(m, 2, 0.5);
  REQUIRE(r.pairs.size() == 1);
  CHECK(r.pairs[0].gt == 0);
  (void)gts;
}

TEST_CASE("optimal_match trivial cases") {
  const MatchResult diag = optimal_match({{0.9, 0.1}, {0.1, 0.8}}, 0.0);
  REQUIRE(diag.pairs.size() == 2);
  CHECK(diag.pairs[0].gt == 0);
  CHECK(diag.pairs[0].pred == 0);
  CHECK(diag.pairs[1].gt == 1);
  CHECK(diag.pairs[1].pred == 1);

  const MatchResult zero = optimal_match({{0.0, 0.0}, {0.0, 0.0}}, 0.0);
  CHECK(zero.pairs.empty());
  CHECK(zero.unmatched_gts.size() == 2);
  CHECK(zero.unmatched_preds.size() == 2);
}

TEST_CASE("optimal_match equals exhaustive search on random instances") {
  Rng64 rng(5);
  for (int k = 0; k < 300; ++k) {
    const int g = rng.uniform_int(1, 4);
    const int p = rng.uniform_int(1, 5);
    std::vector<std::vector<double>> sim(g, std::vector<double>(p));
    for (auto& row : sim)
      for (auto& v : row) {
        v = rng.uniform01();
        if (rng.uniform01() < 0.3) v = 0.0;
        if (rng.uniform01() < 0.2) v = 0.5;  // encourage ties
      }
    const double min_sim = rng.uniform01() < 0.5 ? 0.0 : 0.3;
    const MatchResult got = optimal_match(sim, min_sim);
    const oracles::ExhaustiveBest want = oracles::exhaustive_assignment(sim, min_sim);
    CHECK(got.total_similarity == doctest::Approx(want.total).epsilon(1e-9));
    // Tie-break: lexicographically smallest (gt, pred) pair set.
    std::vector<std::pair<int, int>> got_pairs;
    for (const auto& pr : got.pairs) got_pairs.push_back({pr.gt, pr.pred});
    std::sort(got_pairs.begin(), got_pairs.end());
    CHECK(got_pairs == want.pairs);
  }
}

TEST_CASE("optimal total similarity is at least greedy's") {
  Rng64 rng(17);
  for (int k = 0; k < 200; ++k) {
    const int g = rng.uniform_int(1, 5);
    const int p = rng.uniform_int(1, 6);
    std::vector<std::vector<double>> pred_gt(p, std::vector<double>(g));
    std::vector<std::vector<double>> gt_pred(g, std::vector<double>(p));
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < g; ++j) {
        const double v = rng.uniform01() < 0.4 ? 0.0 : rng.uniform01();
        pred_gt[i][j] = v;
        gt_pred[j][i] = v;
      }
    const MatchResult greedy = greedy_match_matrix(pred_gt, g, 1e-9);
    const MatchResult optimal = optimal_match(gt_pred, 1e-9);
    CHECK(optimal.total_similarity >= greedy.total_similarity - 1e-9);
  }
}

TEST_CASE("optimal_match is invariant to input permutation") {
  Rng64 rng(23);
  std::vector<std::vector<double>> sim(4, std::vector<double>(4));
  for (auto& row : sim)
    for (auto& v : row) v = rng.uniform01();
  const double base = optimal_match(sim, 0.0).total_similarity;
  // Swap two prediction columns.
  std::vector<std::vector<double>> perm = sim;
  for (auto& row : perm) std::swap(row[0], row[3]);
  CHECK(optimal_match(perm, 0.0).total_similarity == doctest::Approx(base));
  // Swap two gt rows.
  std::swap(perm[1], perm[2]);
  CHECK(optimal_match(perm, 0.0).total_similarity == doctest::Approx(base));
}

TEST_CASE("greedy_match is invariant under score-order-preserving permutation") {
  // Permuting gts permutes indices but not the matched IoU multiset.
  const std::vector<BBox> preds = {{0, 0, 10, 10}, {20, 0, 10, 10}};
  const std::vector<BBox> gts1 = {{1, 0, 10, 10}, {21, 0, 10, 10}};
  const std::vector<BBox> gts2 = {{21, 0, 10, 10}, {1, 0, 10, 10}};
  const MatchResult a = greedy_match(preds, gts1, 0.3);
  const MatchResult b = greedy_match(preds, gts2, 0.3);
  CHECK(a.total_similarity == doctest::Approx(b.total_similarity));
  CHECK(a.pairs.size() == b.pairs.size());
}
