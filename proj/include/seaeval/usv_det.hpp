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

#include <map>
#include <string>
#include <vector>

#include "seaeval/core.hpp"

namespace seaeval {

struct UsvDetConfig {
  double iou_threshold = 0.3;
  double zone_membership = 0.5;  // box area fraction inside the zone
};

struct UsvDetCounts {
  std::int64_t tp = 0, fp = 0, fn = 0;
  double precision() const;
  double recall() const;
  double f1() const;
};

struct UsvDetReport {
  double f1_1 = 0.0;  // class-aware
  double f1_2 = 0.0;  // class-agnostic
  double f1_3 = 0.0;  // class-agnostic, danger zone only
  double f1_avg = 0.0;
  UsvDetCounts counts_1, counts_2, counts_3;
  std::int64_t discarded_above_edge = 0;
  std::int64_t fp_suppressed_non_exhaustive = 0;
};

inline double f1_average(double f1_1, double f1_2, double f1_3) {
  return (f1_1 + f1_2 + f1_3) / 3.0;
}

// Obstacle detection scoring with greedy IoU-0.3 matching. Predictions
// strictly above the GT water edge that overlap no ground truth are
// discarded before matching; false positives are not counted in frames
// flagged not exhaustively annotated. The three F1 variants share the same
// discarded-prediction set and differ only in class handling and the
// danger-zone restriction.
UsvDetReport evaluate_usv_det(
    const std::vector<DetectionRecord>& preds,
    const std::vector<GroundTruthRecord>& gts,
    const std::vector<std::string>& frames, const WaterEdgeMap& gt_edges,
    const std::map<std::string, SegmentationRaster>& zone_masks,
    const ClassTable& classes, const UsvDetConfig& cfg = {});

}  // namespace seaeval
