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

#include "seaeval/usv_seg.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "seaeval/errors.hpp"
#include "seaeval/geometry.hpp"

namespace seaeval {

namespace {

constexpr int kNoEdge = -1;

// Column-rasterized edge rows for one polyline: row per covered column,
// kNoEdge elsewhere. Sampling at integer column positions, rounding half-up.
std::vector<int> rasterize_polyline(const Polyline& line, int width, int height) {
  std::vector<int> rows(width, kNoEdge);
  if (line.size() < 2) return rows;
  for (std::size_t s = 0; s + 1 < line.size(); ++s) {
    double x0 = line[s].first, y0 = line[s].second;
    double x1 = line[s + 1].first, y1 = line[s + 1].second;
    if (x0 > x1) {
      std::swap(x0, x1);
      std::swap(y0, y1);
    }
    const int c0 = std::max(0, static_cast<int>(std::ceil(x0)));
    const int c1 = std::min(width - 1, static_cast<int>(std::floor(x1)));
    for (int c = c0; c <= c1; ++c) {
      const double t = x1 > x0 ? (c - x0) / (x1 - x0) : 0.0;
      const int r = std::clamp(raster_round(y0 + t * (y1 - y0)), 0, height - 1);
      rows[c] = r;
    }
  }
  return rows;
}

// Height field for "above the water edge" suppression: per column the lowest
// (max row) covering edge; uncovered columns count as all-above.
std::vector<int> edge_height_field(const WaterEdge& edge, int width, int height) {
  // Uncovered columns keep the sentinel `height`: every row counts as above
  // the edge there, which suppresses rather than invents false positives.
  std::vector<int> field(width, height);
  for (const auto& line : edge.polylines) {
    const auto rows = rasterize_polyline(line, width, height);
    for (int c = 0; c < width; ++c) {
      if (rows[c] == kNoEdge) continue;
      field[c] = field[c] == height ? rows[c] : std::max(field[c], rows[c]);
    }
  }
  return field;
}

}  // namespace

double EdgeFrameResult::mu_a() const {
  return detected > 0 ? std::sqrt(sum_sq_dist / detected) : 0.0;
}

double EdgeFrameResult::mu_r() const {
  return total > 0 ? 100.0 * static_cast<double>(within_theta) / total : 0.0;
}

EdgeFrameResult water_edge_metrics(const SegmentationRaster& pred,
                                   const WaterEdge& gt_edge,
                                   const EdgeMetricConfig& cfg) {
  if (gt_edge.empty()) throw EmptyEdge("frame has no water-edge annotation");
  if (pred.width <= 0 || pred.height <= 0) {
    throw DimensionMismatch("empty prediction raster");
  }

  // Water/non-water transition rows per column: the first row of each run
  // change, interior boundaries only.
  std::vector<std::vector<int>> transitions(pred.width);
  for (int x = 0; x < pred.width; ++x) {
    for (int y = 1; y < pred.height; ++y) {
      const bool above = pred.at(x, y - 1) == SegmentationRaster::kWater;
      const bool here = pred.at(x, y) == SegmentationRaster::kWater;
      if (above != here) transitions[x].push_back(y);
    }
  }

  EdgeFrameResult out;
  for (const auto& line : gt_edge.polylines) {
    const auto rows = rasterize_polyline(line, pred.width, pred.height);
    for (int c = 0; c < pred.width; ++c) {
      if (rows[c] == kNoEdge) continue;
      ++out.total;
      if (transitions[c].empty()) continue;  // undetected column
      int best = std::numeric_limits<int>::max();
      for (int t : transitions[c]) best = std::min(best, std::abs(t - rows[c]));
      ++out.detected;
      out.sum_sq_dist += static_cast<double>(best) * best;
      if (best < cfg.theta_w) ++out.within_theta;
    }
  }
  if (out.total == 0) throw EmptyEdge("water edge rasterizes to no pixels");
  return out;
}

SegFrameResult obstacle_detection_from_mask(const SegmentationRaster& pred,
                                            const std::vector<BBox>& gt_boxes,
                                            const WaterEdge& gt_edge,
                                            const SegmentationRaster& zone_mask,
                                            const SegDetectionConfig& cfg) {
  const int W = pred.width, H = pred.height;
  if (W <= 0 || H <= 0) throw DimensionMismatch("empty prediction raster");
  const bool has_zone = zone_mask.width > 0;
  if (has_zone && (zone_mask.width != W || zone_mask.height != H)) {
    throw DimensionMismatch("zone mask dimensions differ from prediction");
  }
  if (cfg.fp_connectivity != 4 && cfg.fp_connectivity != 8) {
    throw InputError("fp_connectivity must be 4 or 8");
  }

  SegFrameResult out;

  // TP/FN by obstacle-pixel coverage of each GT box.
  for (const auto& box : gt_boxes) {
    const int x0 = std::max(0, raster_round(box.x));
    const int y0 = std::max(0, raster_round(box.y));
    const int x1 = std::min(W, raster_round(box.x2()));
    const int y1 = std::min(H, raster_round(box.y2()));
    std::int64_t area = 0, covered = 0;
    for (int y = y0; y < y1; ++y)
      for (int x = x0; x < x1; ++x) {
        ++area;
        if (pred.at(x, y) == SegmentationRaster::kObstacle) ++covered;
      }
    const bool detected =
        area > 0 &&
        static_cast<double>(covered) / area >= cfg.coverage_threshold;
    const bool in_zone = has_zone && in_zone_fraction(box, zone_mask) >= 0.5;
    out.obstacles.push_back({area, detected, in_zone, false});
    if (detected) {
      ++out.tp;
      if (in_zone) ++out.tp_danger;
    } else {
      ++out.fn;
      if (in_zone) ++out.fn_danger;
    }
  }

  // FP candidates: predicted obstacle pixels, minus static obstacles (above
  // the water edge) and everything inside GT boxes.
  std::vector<char> fp_mask(static_cast<std::size_t>(W) * H, 0);
  const auto height_field = edge_height_field(gt_edge, W, H);
  for (int x = 0; x < W; ++x) {
    for (int y = height_field[x]; y < H; ++y) {
      if (pred.at(x, y) == SegmentationRaster::kObstacle)
        fp_mask[static_cast<std::size_t>(y) * W + x] = 1;
    }
  }
  for (const auto& box : gt_boxes) {
    const int x0 = std::max(0, raster_round(box.x));
    const int y0 = std::max(0, raster_round(box.y));
    const int x1 = std::min(W, raster_round(box.x2()));
    const int y1 = std::min(H, raster_round(box.y2()));
    for (int y = y0; y < y1; ++y)
      for (int x = x0; x < x1; ++x)
        fp_mask[static_cast<std::size_t>(y) * W + x] = 0;
  }

  // Connected components over the survivors (iterative flood fill).
  std::vector<char> seen(fp_mask.size(), 0);
  const int dx8[] = {1, -1, 0, 0, 1, 1, -1, -1};
  const int dy8[] = {0, 0, 1, -1, 1, -1, 1, -1};
  const int n_dirs = cfg.fp_connectivity;
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      const std::size_t idx = static_cast<std::size_t>(y) * W + x;
      if (!fp_mask[idx] || seen[idx]) continue;
      std::int64_t area = 0, in_zone_px = 0;
      std::deque<std::pair<int, int>> queue{{x, y}};
      seen[idx] = 1;
      while (!queue.empty()) {
        const auto [cx, cy] = queue.front();
        queue.pop_front();
        ++area;
        if (has_zone && zone_mask.at(cx, cy) != 0) ++in_zone_px;
        for (int k = 0; k < n_dirs; ++k) {
          const int nx = cx + dx8[k], ny = cy + dy8[k];
          if (nx < 0 || nx >= W || ny < 0 || ny >= H) continue;
          const std::size_t nidx = static_cast<std::size_t>(ny) * W + nx;
          if (fp_mask[nidx] && !seen[nidx]) {
            seen[nidx] = 1;
            queue.push_back({nx, ny});
          }
        }
      }
      if (area >= cfg.fp_min_area) {
        const bool in_zone =
            has_zone && static_cast<double>(in_zone_px) / area >= 0.5;
        out.obstacles.push_back({area, false, in_zone, true});
        ++out.fp;
        if (in_zone) ++out.fp_danger;
      }
    }
  }
  return out;
}

namespace {

double safe_f1(double pr, double re) {
  return pr + re > 0.0 ? 2.0 * pr * re / (pr + re) : 0.0;
}

}  // namespace

SegReport seg_report(const std::vector<EdgeFrameResult>& edge_results,
                     const std::vector<SegFrameResult>& det_results,
                     bool macro, int size_bins) {
  SegReport r;
  double sq = 0.0;
  std::int64_t detected = 0, within = 0, total = 0;
  for (const auto& e : edge_results) {
    sq += e.sum_sq_dist;
    detected += e.detected;
    within += e.within_theta;
    total += e.total;
  }
  r.mu_a = detected > 0 ? std::sqrt(sq / detected) : 0.0;
  r.mu_r = total > 0 ? 100.0 * static_cast<double>(within) / total : 0.0;

  std::vector<ObstacleRecord> all_obstacles;
  for (const auto& d : det_results) {
    r.tp += d.tp;
    r.fp += d.fp;
    r.fn += d.fn;
    r.tp_danger += d.tp_danger;
    r.fp_danger += d.fp_danger;
    r.fn_danger += d.fn_danger;
    all_obstacles.insert(all_obstacles.end(), d.obstacles.begin(),
                         d.obstacles.end());
  }

  auto ratio = [](std::int64_t num, std::int64_t den) {
    return den > 0 ? 100.0 * static_cast<double>(num) / den : 0.0;
  };
  if (macro) {
    // Per-frame ratios averaged; frames with an empty denominator skipped.
    double pr_sum = 0, re_sum = 0, prd_sum = 0, red_sum = 0;
    int pr_n = 0, re_n = 0, prd_n = 0, red_n = 0;
    for (const auto& d : det_results) {
      if (d.tp + d.fp > 0) { pr_sum += ratio(d.tp, d.tp + d.fp); ++pr_n; }
      if (d.tp + d.fn > 0) { re_sum += ratio(d.tp, d.tp + d.fn); ++re_n; }
      if (d.tp_danger + d.fp_danger > 0) {
        prd_sum += ratio(d.tp_danger, d.tp_danger + d.fp_danger);
        ++prd_n;
      }
      if (d.tp_danger + d.fn_danger > 0) {
        red_sum += ratio(d.tp_danger, d.tp_danger + d.fn_danger);
        ++red_n;
      }
    }
    r.precision = pr_n ? pr_sum / pr_n : 0.0;
    r.recall = re_n ? re_sum / re_n : 0.0;
    r.precision_danger = prd_n ? prd_sum / prd_n : 0.0;
    r.recall_danger = red_n ? red_sum / red_n : 0.0;
  } else {
    r.precision = ratio(r.tp, r.tp + r.fp);
    r.recall = ratio(r.tp, r.tp + r.fn);
    r.precision_danger = ratio(r.tp_danger, r.tp_danger + r.fp_danger);
    r.recall_danger = ratio(r.tp_danger, r.tp_danger + r.fn_danger);
  }
  r.f1 = safe_f1(r.precision, r.recall);
  r.f1_danger = safe_f1(r.precision_danger, r.recall_danger);
  r.avg_score = average_score(r.f1, r.f1_danger);

  std::int64_t n_gt = 0;
  for (const auto& o : all_obstacles) n_gt += o.is_fp ? 0 : 1;
  if (n_gt >= size_bins && size_bins > 0) {
    r.size_binned_f1 = size_binned_f1(all_obstacles, size_bins);
  }
  return r;
}

std::vector<double> size_binned_f1(const std::vector<ObstacleRecord>& records,
                                   int bins) {
  std::vector<ObstacleRecord> gt, fps;
  for (const auto& o : records) (o.is_fp ? fps : gt).push_back(o);
  if (static_cast<int>(gt.size()) < bins || bins <= 0) {
    throw TooFewObstacles("need at least " + std::to_string(bins) +
                          " ground-truth obstacles, have " +
                          std::to_string(gt.size()));
  }
  std::stable_sort(gt.begin(), gt.end(),
                   [](const ObstacleRecord& a, const ObstacleRecord& b) {
                     return a.area < b.area;
                   });

  // Equal-count slices; the first (n mod bins) bins take one extra record.
  const std::size_t n = gt.size();
  const std::size_t base = n / bins;
  const std::size_t extra = n % bins;
  std::vector<std::int64_t> tp(bins, 0), fn(bins, 0), fp(bins, 0);
  std::vector<std::int64_t> upper_edge(bins, 0);
  std::size_t pos = 0;
  for (int b = 0; b < bins; ++b) {
    const std::size_t count = base + (static_cast<std::size_t>(b) < extra ? 1 : 0);
    for (std::size_t k = 0; k < count; ++k, ++pos) {
      if (gt[pos].detected) ++tp[b]; else ++fn[b];
    }
    upper_edge[b] = gt[pos - 1].area;
  }
  for (const auto& f : fps) {
    int b = bins - 1;
    for (int i = 0; i < bins; ++i) {
      if (f.area <= upper_edge[i]) { b = i; break; }
    }
    ++fp[b];
  }

  std::vector<double> out(bins, 0.0);
  for (int b = 0; b < bins; ++b) {
    const std::int64_t denom = 2 * tp[b] + fp[b] + fn[b];
    out[b] = denom > 0 ? 100.0 * 2.0 * tp[b] / denom : 0.0;
  }
  return out;
}

}  // namespace seaeval
