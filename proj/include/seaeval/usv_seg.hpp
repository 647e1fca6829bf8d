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

#include <optional>
#include <vector>

#include "seaeval/core.hpp"

namespace seaeval {

struct EdgeMetricConfig {
  double theta_w = 20.0;  // px; edge pixels localized within this pass mu_R
};

struct SegDetectionConfig {
  double coverage_threshold = 0.5;  // tau: obstacle pixel fraction for a TP
  int fp_connectivity = 8;          // 4 or 8
  int fp_min_area = 25;             // px; smaller components are noise
};

// Per-frame water-edge comparison. For every rasterized GT edge pixel the
// vertical distance to the nearest water/non-water transition in the same
// column of `pred` is measured; columns without any transition count the
// pixel as undetected (kept in the mu_R denominator, excluded from mu_A).
struct EdgeFrameResult {
  double sum_sq_dist = 0.0;  // over detected pixels
  std::int64_t detected = 0;
  std::int64_t within_theta = 0;
  std::int64_t total = 0;  // rasterized GT edge pixels
  double mu_a() const;     // RMSE, px
  double mu_r() const;     // percent
};

EdgeFrameResult water_edge_metrics(const SegmentationRaster& pred,
                                   const WaterEdge& gt_edge,
                                   const EdgeMetricConfig& cfg = {});

struct ObstacleRecord {
  std::int64_t area = 0;  // rasterized pixels
  bool detected = false;  // TP vs FN (ground truths) / always false for FPs
  bool in_zone = false;
  bool is_fp = false;     // false-positive component rather than a GT box
};

struct SegFrameResult {
  std::int64_t tp = 0, fp = 0, fn = 0;
  std::int64_t tp_danger = 0, fp_danger = 0, fn_danger = 0;
  std::vector<ObstacleRecord> obstacles;  // GT boxes first, then FP components
};

// Coverage-based dynamic obstacle detection from a predicted segmentation
// mask. Predicted obstacle pixels above the GT water edge or inside GT boxes
// never produce false positives; the survivors are grouped into connected
// components and counted when large enough. The zone mask drives the
// danger-zone variants via the 50% membership rule.
SegFrameResult obstacle_detection_from_mask(
    const SegmentationRaster& pred, const std::vector<BBox>& gt_boxes,
    const WaterEdge& gt_edge, const SegmentationRaster& zone_mask,
    const SegDetectionConfig& cfg = {});

struct SegReport {
  double mu_a = 0.0;      // px
  double mu_r = 0.0;      // percent
  double precision = 0.0; // percent
  double recall = 0.0;    // percent
  double f1 = 0.0;        // percent
  double precision_danger = 0.0;
  double recall_danger = 0.0;
  double f1_danger = 0.0;
  double avg_score = 0.0;  // (f1 + f1_danger) / 2
  std::vector<double> size_binned_f1;  // percent, one per area bin
  std::int64_t tp = 0, fp = 0, fn = 0;
  std::int64_t tp_danger = 0, fp_danger = 0, fn_danger = 0;
};

// Leaderboard composition rule: the average of the overall and danger-zone
// F1 scores.
inline double average_score(double f1, double f1_danger) {
  return 0.5 * (f1 + f1_danger);
}

// Pools per-frame counts over the dataset (micro average: counts summed,
// then ratios). `macro` switches to averaging per-frame ratios instead.
SegReport seg_report(const std::vector<EdgeFrameResult>& edge_results,
                     const std::vector<SegFrameResult>& det_results,
                     bool macro = false, int size_bins = 12);

// F1 per obstacle-area bin: GT obstacles split into `bins` equally populated
// groups by pixel area; FP components are assigned to bins by their own
// area. Throws TooFewObstacles when there are fewer GT obstacles than bins.
std::vector<double> size_binned_f1(const std::vector<ObstacleRecord>& records,
                                   int bins = 12);

}  // namespace seaeval
