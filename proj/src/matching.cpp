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

#include "seaeval/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "seaeval/errors.hpp"
#include "seaeval/geometry.hpp"

namespace seaeval {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Shortest-augmenting-path assignment (potentials form), minimizing cost
// over an n x m matrix with n <= m. Returns row -> column. Deterministic:
// scanning order is fixed, strict improvement required to switch candidates.
std::vector<int> min_cost_assignment(const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  const int m = n ? static_cast<int>(cost[0].size()) : 0;
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<int> p(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(m + 1, kInf);
    std::vector<bool> used(m + 1, false);
    do {
      used[j0] = true;
      const int i0 = p[j0];
      int j1 = -1;
      double delta = kInf;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= m; ++j) {
    if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
  }
  return row_to_col;
}

struct SolveOutcome {
  double total = 0.0;
  std::vector<int> gt_to_pred;  // -1 when unmatched / pair inadmissible
};

// Maximum-similarity assignment where inadmissible pairs act as "leave
// unmatched". Admissible: sim > 0 and sim >= min_sim.
SolveOutcome solve_max(const std::vector<std::vector<double>>& sim,
                       double min_sim, const std::vector<bool>& gt_free,
                       const std::vector<bool>& pred_free) {
  const int g_all = static_cast<int>(sim.size());
  const int p_all = g_all ? static_cast<int>(sim[0].size()) : 0;
  std::vector<int> g_ids, p_ids;
  for (int g = 0; g < g_all; ++g)
    if (gt_free[g]) g_ids.push_back(g);
  for (int p = 0; p < p_all; ++p)
    if (pred_free[p]) p_ids.push_back(p);

  SolveOutcome out;
  out.gt_to_pred.assign(g_all, -1);
  if (g_ids.empty() || p_ids.empty()) return out;

  const bool transpose = g_ids.size() > p_ids.size();
  const int rows = transpose ? static_cast<int>(p_ids.size())
                             : static_cast<int>(g_ids.size());
  const int cols = transpose ? static_cast<int>(g_ids.size())
                             : static_cast<int>(p_ids.size());
  std::vector<std::vector<double>> cost(rows, std::vector<double>(cols, 0.0));
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int g = transpose ? g_ids[c] : g_ids[r];
      const int p = transpose ? p_ids[r] : p_ids[c];
      const double s = sim[g][p];
      if (s > 0.0 && s >= min_sim) cost[r][c] = -s;
    }
  }
  const std::vector<int> rc = min_cost_assignment(cost);
  for (int r = 0; r < rows; ++r) {
    const int c = rc[r];
    if (c < 0) continue;
    const int g = transpose ? g_ids[c] : g_ids[r];
    const int p = transpose ? p_ids[r] : p_ids[c];
    const double s = sim[g][p];
    if (s > 0.0 && s >= min_sim) {
      out.gt_to_pred[g] = p;
      out.total += s;
    }
  }
  return out;
}

// Above this many cells the lexicographic tie canonicalization is skipped;
// the plain solver is already deterministic and the refinement cost grows
// with another full solve per candidate pair.
constexpr std::size_t kLexRefineCellLimit = 4096;

}  // namespace

MatchResult greedy_match(const std::vector<BBox>& preds,
                         const std::vector<BBox>& gts, double iou_threshold) {
  std::vector<std::vector<double>> m(preds.size(),
                                     std::vector<double>(gts.size(), 0.0));
  for (std::size_t i = 0; i < preds.size(); ++i)
    for (std::size_t j = 0; j < gts.size(); ++j) m[i][j] = iou(preds[i], gts[j]);
  return greedy_match_matrix(m, gts.size(), iou_threshold);
}

MatchResult greedy_match_matrix(const std::vector<std::vector<double>>& iou_pred_gt,
                                std::size_t n_gts, double iou_threshold) {
  const int n_pred = static_cast<int>(iou_pred_gt.size());
  const int n_gt = static_cast<int>(n_gts);
  for (const auto& row : iou_pred_gt) {
    if (row.size() != n_gts) throw InputError("iou matrix is ragged");
  }
  MatchResult result;
  std::vector<bool> gt_taken(n_gt, false);
  std::vector<bool> pred_matched(n_pred, false);
  for (int i = 0; i < n_pred; ++i) {
    int best = -1;
    double best_iou = 0.0;
    for (int j = 0; j < n_gt; ++j) {
      if (gt_taken[j]) continue;
      const double v = iou_pred_gt[i][j];
      if (v < iou_threshold) continue;
      if (v > best_iou) {  // strict: equal IoU keeps the lower GT index
        best_iou = v;
        best = j;
      }
    }
    if (best >= 0) {
      gt_taken[best] = true;
      pred_matched[i] = true;
      result.pairs.push_back({i, best, best_iou});
      result.total_similarity += best_iou;
    }
  }
  for (int i = 0; i < n_pred; ++i)
    if (!pred_matched[i]) result.unmatched_preds.push_back(i);
  for (int j = 0; j < n_gt; ++j)
    if (!gt_taken[j]) result.unmatched_gts.push_back(j);
  return result;
}

MatchResult optimal_match(const std::vector<std::vector<double>>& similarity,
                          double min_similarity) {
  const int n_gt = static_cast<int>(similarity.size());
  const int n_pred = n_gt ? static_cast<int>(similarity[0].size()) : 0;
  for (const auto& row : similarity) {
    if (static_cast<int>(row.size()) != n_pred) {
      throw InputError("similarity matrix is ragged");
    }
  }

  std::vector<bool> gt_free(n_gt, true), pred_free(n_pred, true);
  SolveOutcome best = solve_max(similarity, min_similarity, gt_free, pred_free);
  const double target = best.total;
  const double eps = 1e-9 * std::max(1.0, std::abs(target));

  std::vector<int> assignment = best.gt_to_pred;
  if (static_cast<std::size_t>(n_gt) * n_pred <= kLexRefineCellLimit) {
    // Canonicalize among equal-weight optima: fix, per GT in order, the
    // smallest prediction index that still allows the optimum, or leave the
    // GT unmatched when none does.
    assignment.assign(n_gt, -1);
    double fixed_total = 0.0;
    for (int g = 0; g < n_gt; ++g) {
      gt_free[g] = false;
      int chosen = -1;
      for (int p = 0; p < n_pred; ++p) {
        if (!pred_free[p]) continue;
        const double s = similarity[g][p];
        if (!(s > 0.0 && s >= min_similarity)) continue;
        pred_free[p] = false;
        const SolveOutcome rest =
            solve_max(similarity, min_similarity, gt_free, pred_free);
        if (fixed_total + s + rest.total >= target - eps) {
          chosen = p;
          fixed_total += s;
          break;
        }
        pred_free[p] = true;
      }
      assignment[g] = chosen;
    }
  }

  MatchResult result;
  std::vector<bool> pred_matched(n_pred, false);
  for (int g = 0; g < n_gt; ++g) {
    const int p = assignment[g];
    if (p >= 0) {
      result.pairs.push_back({p, g, similarity[g][p]});
      result.total_similarity += similarity[g][p];
      pred_matched[p] = true;
    } else {
      result.unmatched_gts.push_back(g);
    }
  }
  for (int p = 0; p < n_pred; ++p)
    if (!pred_matched[p]) result.unmatched_preds.push_back(p);
  return result;
}

}  // namespace seaeval
