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

#include "seaeval/od_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "seaeval/errors.hpp"
#include "seaeval/geometry.hpp"
#include "seaeval/matching.hpp"
#include "seaeval/parallel.hpp"

namespace seaeval {

namespace {

// Exact area of det covered by the union of (possibly overlapping) regions,
// via coordinate compression of the clipped rectangles.
double union_intersection_area(const BBox& det, const std::vector<BBox>& regions) {
  std::vector<BBox> clipped;
  std::vector<double> xs, ys;
  for (const auto& r : regions) {
    const double x0 = std::max(det.x, r.x);
    const double y0 = std::max(det.y, r.y);
    const double x1 = std::min(det.x2(), r.x2());
    const double y1 = std::min(det.y2(), r.y2());
    if (x1 <= x0 || y1 <= y0) continue;
    clipped.push_back({x0, y0, x1 - x0, y1 - y0});
    xs.push_back(x0);
    xs.push_back(x1);
    ys.push_back(y0);
    ys.push_back(y1);
  }
  if (clipped.empty()) return 0.0;
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  double area = 0.0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
      const double mx = 0.5 * (xs[i] + xs[i + 1]);
      const double my = 0.5 * (ys[j] + ys[j + 1]);
      for (const auto& c : clipped) {
        if (mx >= c.x && mx < c.x2() && my >= c.y && my < c.y2()) {
          area += (xs[i + 1] - xs[i]) * (ys[j + 1] - ys[j]);
          break;
        }
      }
    }
  }
  return area;
}

struct FrameBucket {
  std::vector<BBox> gt_boxes;
  std::vector<BBox> pred_boxes;   // score-descending
  std::vector<double> scores;     // parallel to pred_boxes
  std::vector<std::vector<double>> iou;  // [pred][gt]
};

// Everything evaluate_od needs for one class across the dataset.
struct ClassData {
  std::vector<FrameBucket> frames;  // manifest order, empty buckets included
  std::int64_t n_gt = 0;
};

std::map<std::string, std::size_t> frame_index(const std::vector<std::string>& frames) {
  std::map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (!idx.emplace(frames[i], i).second) {
      throw InputError("duplicate frame id in manifest: " + frames[i]);
    }
  }
  return idx;
}

std::vector<ClassData> build_class_data(const std::vector<DetectionRecord>& preds,
                                        const std::vector<GroundTruthRecord>& gts,
                                        const std::vector<std::string>& frames,
                                        const ClassTable& classes,
                                        double ignore_coverage) {
  const auto fidx = frame_index(frames);
  const std::size_t n_classes = classes.size();

  // Ignore regions per frame; detections mostly inside them are dropped.
  std::vector<std::vector<BBox>> ignore_regions(frames.size());
  for (const auto& g : gts) {
    if (!classes.contains(g.class_id)) {
      throw UnknownClass("gt class id " + std::to_string(g.class_id));
    }
    auto it = fidx.find(g.frame_id);
    if (it == fidx.end()) {
      throw InputError("gt references unknown frame: " + g.frame_id);
    }
    if (g.ignore) ignore_regions[it->second].push_back(g.bbox);
  }

  std::vector<ClassData> data(n_classes);
  for (auto& cd : data) cd.frames.resize(frames.size());

  for (const auto& g : gts) {
    if (g.ignore) continue;
    const std::size_t f = fidx.at(g.frame_id);
    auto& cd = data[static_cast<std::size_t>(g.class_id)];
    cd.frames[f].gt_boxes.push_back(g.bbox);
    ++cd.n_gt;
  }

  // Predictions: validate, suppress over-ignore, group per (class, frame).
  struct PredRef {
    std::size_t frame;
    BBox box;
    double score;
  };
  std::vector<std::vector<PredRef>> per_class(n_classes);
  for (const auto& p : preds) {
    if (!classes.contains(p.class_id)) {
      throw UnknownClass("pred class id " + std::to_string(p.class_id));
    }
    auto it = fidx.find(p.frame_id);
    if (it == fidx.end()) {
      throw InputError("pred references unknown frame: " + p.frame_id);
    }
    const auto& regions = ignore_regions[it->second];
    if (!regions.empty() && p.bbox.area() > 0.0) {
      const double covered = union_intersection_area(p.bbox, regions);
      if (covered / p.bbox.area() > ignore_coverage) continue;
    }
    per_class[static_cast<std::size_t>(p.class_id)].push_back(
        {it->second, p.bbox, p.score});
  }

  for (std::size_t c = 0; c < n_classes; ++c) {
    auto& refs = per_class[c];
    // Stable by score within a frame; original order breaks ties.
    std::stable_sort(refs.begin(), refs.end(),
                     [](const PredRef& a, const PredRef& b) {
                       if (a.frame != b.frame) return a.frame < b.frame;
                       return a.score > b.score;
                     });
    for (const auto& r : refs) {
      auto& bucket = data[c].frames[r.frame];
      bucket.pred_boxes.push_back(r.box);
      bucket.scores.push_back(r.score);
    }
    for (auto& bucket : data[c].frames) {
      bucket.iou.assign(bucket.pred_boxes.size(),
                        std::vector<double>(bucket.gt_boxes.size(), 0.0));
      for (std::size_t i = 0; i < bucket.pred_boxes.size(); ++i)
        for (std::size_t j = 0; j < bucket.gt_boxes.size(); ++j)
          bucket.iou[i][j] = iou(bucket.pred_boxes[i], bucket.gt_boxes[j]);
    }
  }
  return data;
}

// 101-point interpolated precision over the recall grid, from detections in
// global score order.
std::vector<double> interpolated_precision(const std::vector<char>& matched,
                                           std::int64_t n_gt) {
  const std::size_t n = matched.size();
  std::vector<double> recall(n), precision(n);
  std::int64_t tp = 0;
  for (std::size_t i = 0; i < n; ++i) {
    tp += matched[i] ? 1 : 0;
    recall[i] = n_gt > 0 ? static_cast<double>(tp) / n_gt : 0.0;
    precision[i] = static_cast<double>(tp) / static_cast<double>(i + 1);
  }
  for (std::size_t i = n; i-- > 1;) {
    precision[i - 1] = std::max(precision[i - 1], precision[i]);
  }
  std::vector<double> out(kRecallPoints, 0.0);
  for (int k = 0; k < kRecallPoints; ++k) {
    const double r = k / 100.0;
    const auto it = std::lower_bound(recall.begin(), recall.end(), r);
    if (it != recall.end()) out[k] = precision[it - recall.begin()];
  }
  return out;
}

struct ClassThresholdEval {
  std::vector<double> curve;  // 101 precisions
  double ap = 0.0;
  double recall_cap1 = 0.0;
  double recall_cap10 = 0.0;
};

// One class at one IoU threshold: per-frame greedy matching in score order,
// then the dataset-wide PR curve over the global score ordering.
ClassThresholdEval eval_class_threshold(const ClassData& cd, double threshold) {
  ClassThresholdEval out;
  struct Det {
    double score;
    std::size_t frame;
    std::size_t local;
    bool matched;
  };
  std::vector<Det> dets;
  std::int64_t matched_cap1 = 0, matched_cap10 = 0;
  for (std::size_t f = 0; f < cd.frames.size(); ++f) {
    const auto& bucket = cd.frames[f];
    if (bucket.pred_boxes.empty() && bucket.gt_boxes.empty()) continue;
    const MatchResult m =
        greedy_match_matrix(bucket.iou, bucket.gt_boxes.size(), threshold);
    std::vector<char> matched(bucket.pred_boxes.size(), 0);
    for (const auto& pr : m.pairs) matched[static_cast<std::size_t>(pr.pred)] = 1;
    for (std::size_t i = 0; i < bucket.pred_boxes.size(); ++i) {
      dets.push_back({bucket.scores[i], f, i, matched[i] != 0});
    }
    // Recall with per-frame detection caps: truncate to top-k before
    // matching (the caps see the same score ordering).
    for (int cap : {1, 10}) {
      std::vector<std::vector<double>> sub(
          std::min<std::size_t>(cap, bucket.iou.size()));
      for (std::size_t i = 0; i < sub.size(); ++i) sub[i] = bucket.iou[i];
      const MatchResult mc =
          greedy_match_matrix(sub, bucket.gt_boxes.size(), threshold);
      (cap == 1 ? matched_cap1 : matched_cap10) +=
          static_cast<std::int64_t>(mc.pairs.size());
    }
  }
  std::stable_sort(dets.begin(), dets.end(), [](const Det& a, const Det& b) {
    return a.score > b.score;
  });
  std::vector<char> matched_flags(dets.size());
  for (std::size_t i = 0; i < dets.size(); ++i) matched_flags[i] = dets[i].matched;
  out.curve = interpolated_precision(matched_flags, cd.n_gt);
  out.ap = std::accumulate(out.curve.begin(), out.curve.end(), 0.0) / kRecallPoints;
  if (cd.n_gt > 0) {
    out.recall_cap1 = static_cast<double>(matched_cap1) / cd.n_gt;
    out.recall_cap10 = static_cast<double>(matched_cap10) / cd.n_gt;
  }
  return out;
}

double mean_ap_at(const std::vector<ClassData>& data, double threshold) {
  double sum = 0.0;
  int counted = 0;
  for (const auto& cd : data) {
    if (cd.n_gt == 0) continue;
    sum += eval_class_threshold(cd, threshold).ap;
    ++counted;
  }
  return counted ? sum / counted : 0.0;
}

OdReport evaluate_core(const std::vector<DetectionRecord>& preds,
                       const std::vector<GroundTruthRecord>& gts,
                       const std::vector<std::string>& frames,
                       const ClassTable& classes, const OdConfig& cfg) {
  OdReport report;
  const auto data = build_class_data(preds, gts, frames, classes, cfg.ignore_coverage);
  const auto thresholds = od_iou_thresholds();

  std::int64_t total_gt = 0;
  for (const auto& cd : data) total_gt += cd.n_gt;
  if (total_gt == 0) {
    report.warnings.push_back(
        "EmptyGroundTruth: AP undefined on a dataset without ground truth; "
        "reported as 0");
    return report;
  }

  struct ClassResult {
    double ap_sum = 0.0, ap50 = 0.0, ap75 = 0.0;
    double ar1_sum = 0.0, ar10_sum = 0.0;
    std::vector<std::pair<PrCurveKey, std::vector<double>>> curves;
    bool has_gt = false;
  };
  std::vector<ClassResult> results(data.size());

  // (class, threshold) cells are independent; results reduce in fixed order.
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (std::size_t c = 0; c < data.size(); ++c) {
    if (data[c].n_gt == 0) continue;
    results[c].has_gt = true;
    results[c].curves.resize(thresholds.size());
    for (std::size_t t = 0; t < thresholds.size(); ++t) cells.push_back({c, t});
  }
  std::vector<ClassThresholdEval> cell_results(cells.size());
  parallel_for(cells.size(), cfg.jobs, [&](std::size_t k) {
    cell_results[k] = eval_class_threshold(data[cells[k].first],
                                           thresholds[cells[k].second]);
  });
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const auto [c, t] = cells[k];
    auto& r = results[c];
    const auto& e = cell_results[k];
    r.ap_sum += e.ap;
    r.ar1_sum += e.recall_cap1;
    r.ar10_sum += e.recall_cap10;
    if (thresholds[t] == 0.5) r.ap50 = e.ap;
    if (thresholds[t] == 0.75) r.ap75 = e.ap;
    r.curves[t] = {{static_cast<int>(c), thresholds[t]}, e.curve};
  }

  int counted = 0;
  for (std::size_t c = 0; c < results.size(); ++c) {
    const auto& r = results[c];
    if (!r.has_gt) continue;
    ++counted;
    const double ap_c = r.ap_sum / thresholds.size();
    report.ap += ap_c;
    report.ap50 += r.ap50;
    report.ap75 += r.ap75;
    report.ar1 += r.ar1_sum / thresholds.size();
    report.ar10 += r.ar10_sum / thresholds.size();
    report.per_class_ap[classes.name(static_cast<int>(c))] = ap_c;
    for (const auto& [key, curve] : r.curves) report.pr_curves[key] = curve;
  }
  report.ap /= counted;
  report.ap50 /= counted;
  report.ap75 /= counted;
  report.ar1 /= counted;
  report.ar10 /= counted;
  return report;
}

std::vector<GroundTruthRecord> filter_area(const std::vector<GroundTruthRecord>& gts,
                                           double lo, double hi) {
  std::vector<GroundTruthRecord> out;
  for (const auto& g : gts) {
    const double a = g.bbox.area();
    if (g.ignore || (a >= lo && a < hi)) out.push_back(g);
  }
  return out;
}

std::vector<DetectionRecord> filter_area(const std::vector<DetectionRecord>& preds,
                                         double lo, double hi) {
  std::vector<DetectionRecord> out;
  for (const auto& p : preds) {
    const double a = p.bbox.area();
    if (a >= lo && a < hi) out.push_back(p);
  }
  return out;
}

}  // namespace

OdReport evaluate_od(const std::vector<DetectionRecord>& preds,
                     const std::vector<GroundTruthRecord>& gts,
                     const std::vector<std::string>& frames,
                     const ClassTable& classes, const OdConfig& cfg) {
  const ClassTable binary_table = ClassTable::binary();
  auto collapse_preds = [&] {
    std::vector<DetectionRecord> out = preds;
    for (auto& p : out) p.class_id = 0;
    return out;
  };
  auto collapse_gts = [&] {
    std::vector<GroundTruthRecord> out = gts;
    for (auto& g : out) g.class_id = 0;
    return out;
  };

  OdReport report;
  if (cfg.binary) {
    report = evaluate_core(collapse_preds(), collapse_gts(), frames, binary_table, cfg);
    report.binary_ap = report.ap;
  } else {
    report = evaluate_core(preds, gts, frames, classes, cfg);
    OdConfig sub = cfg;
    sub.jobs = 1;
    const OdReport b =
        evaluate_core(collapse_preds(), collapse_gts(), frames, binary_table, sub);
    report.binary_ap = b.ap;
    for (const auto& w : b.warnings) {
      if (std::find(report.warnings.begin(), report.warnings.end(), w) ==
          report.warnings.end()) {
        report.warnings.push_back(w);
      }
    }

    // Informational area breakdown; plain filter on box area, both sides.
    const double s32 = 32.0 * 32.0, s96 = 96.0 * 96.0;
    const double inf = std::numeric_limits<double>::infinity();
    const struct {
      const char* name;
      double lo, hi;
    } ranges[] = {{"small", 0.0, s32}, {"medium", s32, s96}, {"large", s96, inf}};
    for (const auto& r : ranges) {
      const auto fg = filter_area(gts, r.lo, r.hi);
      bool any = false;
      for (const auto& g : fg) any |= !g.ignore;
      if (!any) continue;
      const OdReport ar =
          evaluate_core(filter_area(preds, r.lo, r.hi), fg, frames, classes, sub);
      report.area_ap[r.name] = ar.ap;
    }
  }
  return report;
}

TideReport tide_decompose(const std::vector<DetectionRecord>& preds,
                          const std::vector<GroundTruthRecord>& gts,
                          const std::vector<std::string>& frames,
                          const ClassTable& classes, double base_iou) {
  constexpr double kForeground = 0.1;
  TideReport report;

  // Vanilla class-aware matching at the base threshold, per frame.
  const auto fidx = frame_index(frames);
  struct FramePreds {
    std::vector<std::size_t> order;  // indices into preds, score-descending
  };
  std::vector<FramePreds> frame_preds(frames.size());
  std::vector<std::vector<std::size_t>> frame_gts(frames.size());
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (!classes.contains(preds[i].class_id))
      throw UnknownClass("pred class id " + std::to_string(preds[i].class_id));
    auto it = fidx.find(preds[i].frame_id);
    if (it == fidx.end()) throw InputError("pred references unknown frame");
    frame_preds[it->second].order.push_back(i);
  }
  for (std::size_t j = 0; j < gts.size(); ++j) {
    if (gts[j].ignore) continue;
    auto it = fidx.find(gts[j].frame_id);
    if (it == fidx.end()) throw InputError("gt references unknown frame");
    frame_gts[it->second].push_back(j);
  }

  enum class Kind { kTp, kCls, kLoc, kBoth, kDupe, kBkg };
  std::vector<Kind> pred_kind(preds.size(), Kind::kBkg);
  std::vector<std::size_t> pred_fix_gt(preds.size(), SIZE_MAX);
  std::vector<char> gt_matched(gts.size(), 0);

  for (std::size_t f = 0; f < frames.size(); ++f) {
    auto& order = frame_preds[f].order;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return preds[a].score > preds[b].score;
    });
    const auto& gt_ids = frame_gts[f];
    // Class-aware similarity: wrong-class pairs are inadmissible.
    std::vector<std::vector<double>> sim(order.size(),
                                         std::vector<double>(gt_ids.size(), 0.0));
    for (std::size_t i = 0; i < order.size(); ++i)
      for (std::size_t j = 0; j < gt_ids.size(); ++j)
        if (preds[order[i]].class_id == gts[gt_ids[j]].class_id)
          sim[i][j] = iou(preds[order[i]].bbox, gts[gt_ids[j]].bbox);
    const MatchResult m = greedy_match_matrix(sim, gt_ids.size(), base_iou);
    for (const auto& pr : m.pairs) {
      pred_kind[order[static_cast<std::size_t>(pr.pred)]] = Kind::kTp;
      gt_matched[gt_ids[static_cast<std::size_t>(pr.gt)]] = 1;
    }
    for (int pi : m.unmatched_preds) {
      const std::size_t p = order[static_cast<std::size_t>(pi)];
      double best_same = 0.0, best_other = 0.0;
      std::size_t best_same_gt = SIZE_MAX, best_other_gt = SIZE_MAX;
      for (std::size_t j = 0; j < gt_ids.size(); ++j) {
        const double v = iou(preds[p].bbox, gts[gt_ids[j]].bbox);
        if (preds[p].class_id == gts[gt_ids[j]].class_id) {
          if (v > best_same) best_same = v, best_same_gt = gt_ids[j];
        } else {
          if (v > best_other) best_other = v, best_other_gt = gt_ids[j];
        }
      }
      if (best_same >= base_iou) {
        pred_kind[p] = Kind::kDupe;
      } else if (best_other >= base_iou) {
        pred_kind[p] = Kind::kCls;
        pred_fix_gt[p] = best_other_gt;
      } else if (best_same >= kForeground) {
        pred_kind[p] = Kind::kLoc;
        pred_fix_gt[p] = best_same_gt;
      } else if (best_other >= kForeground) {
        pred_kind[p] = Kind::kBoth;
      } else {
        pred_kind[p] = Kind::kBkg;
      }
    }
  }

  for (std::size_t j = 0; j < gts.size(); ++j)
    if (!gts[j].ignore && !gt_matched[j]) ++report.missed;
  for (std::size_t p = 0; p < preds.size(); ++p) {
    switch (pred_kind[p]) {
      case Kind::kTp: break;
      case Kind::kCls: ++report.classification; break;
      case Kind::kLoc: ++report.localization; break;
      case Kind::kBoth: ++report.both; break;
      case Kind::kDupe: ++report.duplicate; break;
      case Kind::kBkg: ++report.background; break;
    }
  }

  // Fix-and-re-evaluate at the base threshold; each delta is the AP change
  // after repairing that error category alone.
  auto ap_of = [&](const std::vector<DetectionRecord>& p,
                   const std::vector<GroundTruthRecord>& g) {
    return mean_ap_at(build_class_data(p, g, frames, classes, 0.5), base_iou);
  };
  report.base_ap = ap_of(preds, gts);

  auto fixed_preds = [&](Kind target, bool remove) {
    std::vector<DetectionRecord> out;
    out.reserve(preds.size());
    for (std::size_t p = 0; p < preds.size(); ++p) {
      DetectionRecord d = preds[p];
      if (pred_kind[p] == target) {
        if (remove) continue;
        if (target == Kind::kCls) d.class_id = gts[pred_fix_gt[p]].class_id;
        if (target == Kind::kLoc) d.bbox = gts[pred_fix_gt[p]].bbox;
      }
      out.push_back(d);
    }
    return out;
  };

  report.dap_classification = ap_of(fixed_preds(Kind::kCls, false), gts) - report.base_ap;
  report.dap_localization = ap_of(fixed_preds(Kind::kLoc, false), gts) - report.base_ap;
  report.dap_both = ap_of(fixed_preds(Kind::kBoth, true), gts) - report.base_ap;
  report.dap_duplicate = ap_of(fixed_preds(Kind::kDupe, true), gts) - report.base_ap;
  report.dap_background = ap_of(fixed_preds(Kind::kBkg, true), gts) - report.base_ap;

  std::vector<GroundTruthRecord> gts_without_missed;
  for (std::size_t j = 0; j < gts.size(); ++j)
    if (gts[j].ignore || gt_matched[j]) gts_without_missed.push_back(gts[j]);
  report.dap_missed = ap_of(preds, gts_without_missed) - report.base_ap;
  report.dap_false_negative = report.dap_missed;

  std::vector<DetectionRecord> tp_only;
  for (std::size_t p = 0; p < preds.size(); ++p)
    if (pred_kind[p] == Kind::kTp) tp_only.push_back(preds[p]);
  report.dap_false_positive = ap_of(tp_only, gts) - report.base_ap;
  return report;
}

std::pair<OdReport, OdReport> corrected_reeval(
    const std::vector<DetectionRecord>& preds,
    const std::vector<GroundTruthRecord>& gts,
    const std::vector<std::string>& frames, const ClassTable& classes,
    const GtCorrections& corrections, const OdConfig& cfg) {
  std::vector<GroundTruthRecord> corrected = gts;
  std::set<std::int64_t> present;
  for (const auto& g : corrected) present.insert(g.id);
  for (const auto& [id, box] : corrections.moved) {
    if (!present.count(id)) {
      throw EditTargetMissing("no ground truth with id " + std::to_string(id));
    }
    for (auto& g : corrected) {
      if (g.id == id) g.bbox = box;
    }
  }
  for (const auto& g : corrections.added) corrected.push_back(g);

  return {evaluate_od(preds, gts, frames, classes, cfg),
          evaluate_od(preds, corrected, frames, classes, cfg)};
}

}  // namespace seaeval
