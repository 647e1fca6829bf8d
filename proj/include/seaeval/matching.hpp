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

#pragma once

#include <vector>

#include "seaeval/core.hpp"

namespace seaeval {

struct MatchPair {
  int pred = -1;
  int gt = -1;
  double similarity = 0.0;
};

struct MatchResult {
  std::vector<MatchPair> pairs;
  std::vector<int> unmatched_preds;
  std::vector<int> unmatched_gts;
  double total_similarity = 0.0;
};

// Score-ordered greedy matching used by the detection protocols. `preds`
// must already be sorted by score descending (ties by input order); each
// prediction takes the highest-IoU still-free ground truth with
// IoU >= threshold. Equal IoU candidates resolve to the lower GT index.
MatchResult greedy_match(const std::vector<BBox>& preds,
                         const std::vector<BBox>& gts, double iou_threshold);

// Same semantics over a precomputed IoU matrix (rows = predictions in score
// order, cols = ground truths); the metric modules reuse per-frame matrices
// across thresholds through this entry point. `n_gts` must be passed
// explicitly: a frame with ground truths but no predictions has an empty
// matrix, and its ground truths still count as unmatched.
MatchResult greedy_match_matrix(const std::vector<std::vector<double>>& iou_pred_gt,
                                std::size_t n_gts, double iou_threshold);

// Maximum-total-similarity one-to-one assignment over a rectangular
// similarity matrix (rows = ground truths, cols = predictions). Pairs are
// admitted only when similarity > 0 and >= min_similarity. Among
// maximum-weight assignments the lexicographically smallest (gt, pred) pair
// set is returned, which keeps identity bookkeeping stable across inputs
// that merely permute equal options.
MatchResult optimal_match(const std::vector<std::vector<double>>& similarity,
                          double min_similarity = 0.0);

}  // namespace seaeval
