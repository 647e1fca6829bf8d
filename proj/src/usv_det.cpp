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

#include "seaeval/usv_det.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "seaeval/errors.hpp"
#include "seaeval/geometry.hpp"
#include "seaeval/matching.hpp"

namespace seaeval {

namespace {

// Continuous edge height (image y, larger = lower) at column x; the lowest
// covering polyline wins. nullopt when no polyline spans the column.
std::optional<double> edge_height_at(const WaterEdge& edge, double x) {
  std::optional<double> best;
  for (const auto& line : edge.polylines) {
    for (std::size_t s = 0; s + 1 < line.size(); ++s) {
      double x0 = line[s].first, y0 = line[s].second;
      double x1 = line[s + 1].first, y1 = line[s + 1].second;
      if (x0 > x1) {
        std::swap(x0, x1);
        std::swap(y0, y1);
      }
      if (x < x0 || x > x1) continue;
      const double t = x1 > x0 ? (x - x0) / (x1 - x0) : 0.0;
      const double y = y0 + t * (y1 - y0);
      if (!best || y > *best) best = y;
    }
  }
  return best;
}

bool boxes_overlap(const BBox& a, const BBox& b) {
  return std::min(a.x2(), b.x2()) > std::max(a.x, b.x) &&
         std::min(a.y2(), b.y2()) > std::max(a.y, b.y);
}

}  // namespace

double UsvDetCounts::precision() const {
  return tp + fp > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
}
double UsvDetCounts::recall() const {
  return tp + fn > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
}
double UsvDetCounts::f1() const {
  const double pr = precision(), re = recall();
  return pr + re > 0.0 ? 2.0 * pr * re / (pr + re) : 0.0;
}

UsvDetReport evaluate_usv_det(
    const std::vector<DetectionRecord>& preds,
    const std::vector<GroundTruthRecord>& gts,
    const std::vector<std::string>& frames, const WaterEdgeMap& gt_edges,
    const std::map<std::string, SegmentationRaster>& zone_masks,
    const ClassTable& classes, const UsvDetConfig& cfg) {
  std::map<std::string, std::size_t> fidx;
  for (std::size_t i = 0; i < frames.size(); ++i) fidx[frames[i]] = i;

  struct FrameData {
    std::vector<const DetectionRecord*> preds;
    std::vector<const GroundTruthRecord*> gts;
    bool exhaustive = true;
  };
  std::vector<FrameData> fd(frames.size());
  for (const auto& g : gts) {
    if (!classes.contains(g.class_id))
      throw UnknownClass("gt class id " + std::to_string(g.class_id));
    auto it = fidx.find(g.frame_id);
    if (it == fidx.end()) throw InputError("gt references unknown frame: " + g.frame_id);
    fd[it->second].gts.push_back(&g);
    if (!g.exhaustive) fd[it->second].exhaustive = false;
  }
  for (const auto& p : preds) {
    if (!classes.contains(p.class_id))
      throw UnknownClass("pred class id " + std::to_string(p.class_id));
    auto it = fidx.find(p.frame_id);
    if (it == fidx.end()) throw InputError("pred references unknown frame: " + p.frame_id);
    fd[it->second].preds.push_back(&p);
  }

  UsvDetReport report;
  static const SegmentationRaster kEmptyZone;

  for (std::size_t f = 0; f < frames.size(); ++f) {
    auto& frame = fd[f];
    if (frame.preds.empty() && frame.gts.empty()) continue;

    const WaterEdge* edge = nullptr;
    if (auto it = gt_edges.find(frames[f]); it != gt_edges.end()) {
      edge = &it->second;
    }
    if (!edge && !frame.preds.empty()) {
      throw MissingEdgeForFrame("no water edge for frame " + frames[f]);
    }
    const SegmentationRaster* zone = &kEmptyZone;
    if (auto it = zone_masks.find(frames[f]); it != zone_masks.end()) {
      zone = &it->second;
    }

    // Static-obstacle suppression: a prediction whose bottom edge sits
    // strictly above the interpolated water edge at its horizontal center is
    // discarded unless it overlaps some ground truth. Columns no polyline
    // spans count as above.
    std::vector<const DetectionRecord*> kept;
    for (const auto* p : frame.preds) {
      const auto h = edge_height_at(*edge, p->bbox.cx());
      const bool above = !h || p->bbox.y2() < *h;
      if (above) {
        bool overlaps = false;
        for (const auto* g : frame.gts) {
          if (boxes_overlap(p->bbox, g->bbox)) {
            overlaps = true;
            break;
          }
        }
        if (!overlaps) {
          ++report.discarded_above_edge;
          continue;
        }
      }
      kept.push_back(p);
    }
    std::stable_sort(kept.begin(), kept.end(),
                     [](const DetectionRecord* a, const DetectionRecord* b) {
                       return a->score > b->score;
                     });

    const bool zone_available = zone->width > 0;
    auto in_zone = [&](const BBox& b) {
      return zone_available &&
             in_zone_fraction(b, *zone) >= cfg.zone_membership;
    };

    // The three variants share discarded predictions and the greedy order.
    for (int variant = 1; variant <= 3; ++variant) {
      std::vector<const DetectionRecord*> vp;
      std::vector<const GroundTruthRecord*> vg;
      for (const auto* p : kept)
        if (variant != 3 || in_zone(p->bbox)) vp.push_back(p);
      for (const auto* g : frame.gts)
        if (variant != 3 || in_zone(g->bbox)) vg.push_back(g);

      std::vector<std::vector<double>> sim(vp.size(),
                                           std::vector<double>(vg.size(), 0.0));
      for (std::size_t i = 0; i < vp.size(); ++i)
        for (std::size_t j = 0; j < vg.size(); ++j) {
          if (variant == 1 && vp[i]->class_id != vg[j]->class_id) continue;
          sim[i][j] = iou(vp[i]->bbox, vg[j]->bbox);
        }
      const MatchResult m = greedy_match_matrix(sim, vg.size(), cfg.iou_threshold);

      UsvDetCounts& c = variant == 1   ? report.counts_1
                        : variant == 2 ? report.counts_2
                                       : report.counts_3;
      c.tp += static_cast<std::int64_t>(m.pairs.size());
      c.fn += static_cast<std::int64_t>(m.unmatched_gts.size());
      if (frame.exhaustive) {
        c.fp += static_cast<std::int64_t>(m.unmatched_preds.size());
      } else if (variant == 2) {
        report.fp_suppressed_non_exhaustive +=
            static_cast<std::int64_t>(m.unmatched_preds.size());
      }
    }
  }

  report.f1_1 = report.counts_1.f1();
  report.f1_2 = report.counts_2.f1();
  report.f1_3 = report.counts_3.f1();
  report.f1_avg = f1_average(report.f1_1, report.f1_2, report.f1_3);
  return report;
}

}  // namespace seaeval
