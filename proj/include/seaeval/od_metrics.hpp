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

#include <array>
#include <map>
#include <string>
#include <vector>

#include "seaeval/core.hpp"

namespace seaeval {

// IoU grid 0.50:0.05:0.95 and the 101-point recall grid of the COCO-style
// protocol. The grids are fixed; callers never tune them.
inline std::vector<double> od_iou_thresholds() {
  std::vector<double> t;
  for (int i = 0; i < 10; ++i) t.push_back(0.5 + 0.05 * i);
  return t;
}
constexpr int kRecallPoints = 101;

struct PrCurveKey {
  int class_id = 0;
  double iou_threshold = 0.5;
  bool operator<(const PrCurveKey& o) const {
    if (class_id != o.class_id) return class_id < o.class_id;
    return iou_threshold < o.iou_threshold;
  }
};

struct OdReport {
  double ap = 0.0;
  double ap50 = 0.0;
  double ap75 = 0.0;
  double ar1 = 0.0;
  double ar10 = 0.0;
  double binary_ap = 0.0;
  std::map<std::string, double> per_class_ap;  // class name -> AP, GT-present classes only
  // Area-range breakdowns (COCO small/medium/large); informational, not part
  // of the headline metrics.
  std::map<std::string, double> area_ap;
  std::map<PrCurveKey, std::vector<double>> pr_curves;  // 101 precisions per key
  std::vector<std::string> warnings;
};

struct OdConfig {
  bool binary = false;  // collapse every class onto "non-water" before matching
  int jobs = 1;
  // Prediction-over-ignore-region suppression threshold: predictions whose
  // area is covered by ignore regions above this fraction are dropped before
  // evaluation.
  double ignore_coverage = 0.5;
};

OdReport evaluate_od(const std::vector<DetectionRecord>& preds,
                     const std::vector<GroundTruthRecord>& gts,
                     const std::vector<std::string>& frames,
                     const ClassTable& classes, const OdConfig& cfg = {});

// Detection error decomposition at a fixed base IoU. Categories partition
// every false positive; every unmatched ground truth counts as missed.
struct TideReport {
  int classification = 0;  // IoU >= base with a wrong-class GT
  int localization = 0;    // foreground IoU in [0.1, base) with the right class
  int both = 0;            // foreground IoU in [0.1, base) with a wrong class
  int duplicate = 0;       // IoU >= base with an already-claimed right-class GT
  int background = 0;      // IoU < 0.1 against every GT
  int missed = 0;          // unmatched ground truths

  double dap_classification = 0.0;
  double dap_localization = 0.0;
  double dap_both = 0.0;
  double dap_duplicate = 0.0;
  double dap_background = 0.0;
  double dap_missed = 0.0;
  double dap_false_positive = 0.0;  // drop every FP
  double dap_false_negative = 0.0;  // drop every missed GT
  double base_ap = 0.0;

  int false_positives() const {
    return classification + localization + both + duplicate + background;
  }
};

TideReport tide_decompose(const std::vector<DetectionRecord>& preds,
                          const std::vector<GroundTruthRecord>& gts,
                          const std::vector<std::string>& frames,
                          const ClassTable& classes, double base_iou = 0.5);

// Annotation-correction re-evaluation: `moved` re-places existing boxes by
// annotation id, `added` appends new ground truths. Returns the report pair
// (before, after).
struct GtCorrections {
  std::map<std::int64_t, BBox> moved;
  std::vector<GroundTruthRecord> added;
};

std::pair<OdReport, OdReport> corrected_reeval(
    const std::vector<DetectionRecord>& preds,
    const std::vector<GroundTruthRecord>& gts,
    const std::vector<std::string>& frames, const ClassTable& classes,
    const GtCorrections& corrections, const OdConfig& cfg = {});

}  // namespace seaeval
