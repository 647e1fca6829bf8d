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

struct MotConfig {
  double iou_min = 0.5;     // CLEAR matching threshold
  double mt_threshold = 0.8;
  double ml_threshold = 0.2;
  std::vector<double> hota_alphas() const {
    std::vector<double> a;
    for (int i = 1; i <= 19; ++i) a.push_back(0.05 * i);
    return a;
  }
};

struct MotReport {
  double hota = 0.0;
  double mota = 0.0;
  double idf1 = 0.0;
  double motp = 0.0;  // mean (1 - IoU) over TP pairs; lower is better
  double recall = 0.0;
  double precision = 0.0;
  std::int64_t mostly_tracked = 0;
  std::int64_t mostly_lost = 0;
  std::int64_t false_positives = 0;
  std::int64_t false_negatives = 0;
  std::int64_t id_switches = 0;
  std::int64_t fragmentations = 0;
  std::int64_t true_positives = 0;
  std::int64_t gt_count = 0;        // total ground-truth boxes
  std::int64_t gt_track_count = 0;  // after short-term splitting
  std::map<std::string, double> per_sequence_hota;
};

// One-class, short-term multi-object tracking evaluation for a single
// sequence. Ground-truth identities that leave the annotated frames and
// re-enter later are split into new tracks before scoring.
MotReport evaluate_mot(const TrackSet& pred, const TrackSet& gt,
                       const MotConfig& cfg = {});

// Pooled evaluation over several sequences: CLEAR and HOTA accumulators are
// summed across sequences (identities never cross sequences) and the
// combined metrics computed from the pooled counts. per_sequence_hota holds
// each sequence scored on its own.
MotReport evaluate_mot_multi(
    const std::vector<std::pair<TrackSet, TrackSet>>& pred_gt_pairs,
    const MotConfig& cfg = {});

std::map<std::string, double> per_sequence_hota(
    const std::vector<std::pair<TrackSet, TrackSet>>& pred_gt_pairs,
    const MotConfig& cfg = {});

}  // namespace seaeval
