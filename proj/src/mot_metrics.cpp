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

#include "seaeval/mot_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "seaeval/errors.hpp"
#include "seaeval/geometry.hpp"
#include "seaeval/matching.hpp"

namespace seaeval {

namespace {

struct FrameObjects {
  std::vector<int> ids;  // dense track indices
  std::vector<BBox> boxes;
};

struct SeqData {
  std::vector<FrameObjects> gt;    // manifest order
  std::vector<FrameObjects> pred;
  std::vector<std::vector<std::vector<double>>> sim;  // [frame][gt][pred]
  std::vector<std::int64_t> gt_presence;    // frames per dense gt id
  std::vector<std::int64_t> pred_presence;  // frames per dense pred id
  std::int64_t gt_boxes = 0;
};

// Groups entries per manifest frame; preds referencing unknown frames throw.
// GT identities are split at frame gaps first: a track that leaves the
// annotated timeline and re-enters continues as a new identity (short-term
// protocol), so re-identification across gaps is neither required nor
// rewarded.
SeqData build_seq(const TrackSet& pred, const TrackSet& gt) {
  SeqData d;
  std::map<std::string, int> fidx;
  for (std::size_t i = 0; i < gt.frames.size(); ++i) {
    if (!fidx.emplace(gt.frames[i], static_cast<int>(i)).second) {
      throw InputError("duplicate frame in manifest: " + gt.frames[i]);
    }
  }
  const int n_frames = static_cast<int>(gt.frames.size());
  d.gt.resize(n_frames);
  d.pred.resize(n_frames);

  // Split GT ids at gaps.
  std::map<std::int64_t, std::vector<std::pair<int, BBox>>> by_id;
  std::set<std::pair<std::string, std::int64_t>> seen_gt;
  for (const auto& e : gt.entries) {
    auto it = fidx.find(e.frame_id);
    if (it == fidx.end()) throw FrameMismatch("gt entry on unknown frame: " + e.frame_id);
    if (!seen_gt.insert({e.frame_id, e.track_id}).second) {
      throw InputError("duplicate (frame, track) in gt");
    }
    by_id[e.track_id].push_back({it->second, e.bbox});
  }
  int next_dense = 0;
  for (auto& [id, obs] : by_id) {
    std::sort(obs.begin(), obs.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    int dense = -1;
    int prev_frame = -2;
    for (const auto& [f, box] : obs) {
      if (f != prev_frame + 1) dense = next_dense++;
      prev_frame = f;
      d.gt[f].ids.push_back(dense);
      d.gt[f].boxes.push_back(box);
      ++d.gt_boxes;
    }
  }
  d.gt_presence.assign(next_dense, 0);
  for (const auto& fo : d.gt)
    for (int id : fo.ids) ++d.gt_presence[id];

  std::map<std::int64_t, int> pred_dense;
  std::set<std::pair<std::string, std::int64_t>> seen_pred;
  for (const auto& e : pred.entries) {
    auto it = fidx.find(e.frame_id);
    if (it == fidx.end()) {
      throw FrameMismatch("pred entry on unknown frame: " + e.frame_id);
    }
    if (!seen_pred.insert({e.frame_id, e.track_id}).second) {
      throw InputError("duplicate (frame, track) in pred");
    }
    auto [pit, fresh] = pred_dense.emplace(e.track_id, static_cast<int>(pred_dense.size()));
    (void)fresh;
    d.pred[it->second].ids.push_back(pit->second);
    d.pred[it->second].boxes.push_back(e.bbox);
  }
  d.pred_presence.assign(pred_dense.size(), 0);
  for (const auto& fo : d.pred)
    for (int id : fo.ids) ++d.pred_presence[id];

  d.sim.resize(n_frames);
  for (int f = 0; f < n_frames; ++f) {
    const auto& g = d.gt[f];
    const auto& p = d.pred[f];
    d.sim[f].assign(g.ids.size(), std::vector<double>(p.ids.size(), 0.0));
    for (std::size_t i = 0; i < g.ids.size(); ++i)
      for (std::size_t j = 0; j < p.ids.size(); ++j)
        d.sim[f][i][j] = iou(g.boxes[i], p.boxes[j]);
  }
  return d;
}

// Pooled accumulators; sequences sum elementwise (identities never span
// sequences).
struct MotAccum {
  std::int64_t tp = 0, fp = 0, fn = 0, ids = 0, frag = 0;
  std::int64_t gt_boxes = 0, gt_tracks = 0, mt = 0, ml = 0;
  double sum_one_minus_iou = 0.0;
  std::int64_t idtp = 0, gt_frames_total = 0, pred_frames_total = 0;
  std::vector<std::int64_t> hota_tp, hota_fp, hota_fn;
  std::vector<double> ass_sum;  // sum over TP pairs of A(c), per alpha

  void add(const MotAccum& o) {
    tp += o.tp; fp += o.fp; fn += o.fn; ids += o.ids; frag += o.frag;
    gt_boxes += o.gt_boxes; gt_tracks += o.gt_tracks; mt += o.mt; ml += o.ml;
    sum_one_minus_iou += o.sum_one_minus_iou;
    idtp += o.idtp;
    gt_frames_total += o.gt_frames_total;
    pred_frames_total += o.pred_frames_total;
    if (hota_tp.empty()) {
      hota_tp = o.hota_tp; hota_fp = o.hota_fp; hota_fn = o.hota_fn;
      ass_sum = o.ass_sum;
    } else {
      for (std::size_t a = 0; a < hota_tp.size(); ++a) {
        hota_tp[a] += o.hota_tp[a];
        hota_fp[a] += o.hota_fp[a];
        hota_fn[a] += o.hota_fn[a];
        ass_sum[a] += o.ass_sum[a];
      }
    }
  }
};

void clear_pass(const SeqData& d, const MotConfig& cfg, MotAccum& acc) {
  const int n_frames = static_cast<int>(d.gt.size());
  const int n_gt_ids = static_cast<int>(d.gt_presence.size());
  std::vector<int> last_match(n_gt_ids, -1);     // most recent matched pred id
  std::vector<char> was_tracked(n_gt_ids, 0);
  std::vector<char> prev_status_tracked(n_gt_ids, 0);
  std::vector<int> prev_frame_match(n_gt_ids, -1);  // pred id matched in previous frame
  std::vector<std::int64_t> gt_matched_frames(n_gt_ids, 0);

  for (int f = 0; f < n_frames; ++f) {
    const auto& g = d.gt[f];
    const auto& p = d.pred[f];
    const auto& sim = d.sim[f];
    const int ng = static_cast<int>(g.ids.size());
    const int np = static_cast<int>(p.ids.size());

    std::vector<int> gt_to_pred(ng, -1);
    std::vector<char> pred_used(np, 0);

    // Continuity preference: keep last frame's pair when it still overlaps.
    std::vector<int> pred_pos(d.pred_presence.size(), -1);
    for (int j = 0; j < np; ++j) pred_pos[p.ids[j]] = j;
    for (int i = 0; i < ng; ++i) {
      const int want = prev_frame_match[g.ids[i]];
      if (want < 0) continue;
      const int j = pred_pos[want];
      if (j >= 0 && !pred_used[j] && sim[i][j] >= cfg.iou_min) {
        gt_to_pred[i] = j;
        pred_used[j] = 1;
      }
    }
    // Optimal assignment on the remainder.
    std::vector<std::vector<double>> rest(ng);
    for (int i = 0; i < ng; ++i) {
      rest[i].assign(np, 0.0);
      if (gt_to_pred[i] >= 0) continue;
      for (int j = 0; j < np; ++j)
        if (!pred_used[j]) rest[i][j] = sim[i][j];
    }
    const MatchResult m = optimal_match(rest, cfg.iou_min);
    for (const auto& pr : m.pairs) {
      gt_to_pred[pr.gt] = pr.pred;
      pred_used[pr.pred] = 1;
    }

    std::fill(prev_frame_match.begin(), prev_frame_match.end(), -1);
    for (int i = 0; i < ng; ++i) {
      const int gid = g.ids[i];
      const int j = gt_to_pred[i];
      if (j >= 0) {
        ++acc.tp;
        acc.sum_one_minus_iou += 1.0 - sim[i][j];
        ++gt_matched_frames[gid];
        const int pid = p.ids[j];
        if (last_match[gid] >= 0 && last_match[gid] != pid) ++acc.ids;
        if (was_tracked[gid] && !prev_status_tracked[gid]) ++acc.frag;
        last_match[gid] = pid;
        was_tracked[gid] = 1;
        prev_status_tracked[gid] = 1;
        prev_frame_match[gid] = pid;
      } else {
        ++acc.fn;
        prev_status_tracked[gid] = 0;
      }
    }
    for (int j = 0; j < np; ++j)
      if (!pred_used[j]) ++acc.fp;
  }

  acc.gt_boxes = d.gt_boxes;
  acc.gt_tracks = n_gt_ids;
  for (int i = 0; i < n_gt_ids; ++i) {
    const double ratio =
        d.gt_presence[i] > 0
            ? static_cast<double>(gt_matched_frames[i]) / d.gt_presence[i]
            : 0.0;
    if (ratio >= cfg.mt_threshold) ++acc.mt;
    if (ratio <= cfg.ml_threshold) ++acc.ml;
  }
}

void hota_pass(const SeqData& d, const MotConfig& cfg, MotAccum& acc) {
  const auto alphas = cfg.hota_alphas();
  const int n_gt_ids = static_cast<int>(d.gt_presence.size());
  const int n_pred_ids = static_cast<int>(d.pred_presence.size());
  acc.hota_tp.assign(alphas.size(), 0);
  acc.hota_fp.assign(alphas.size(), 0);
  acc.hota_fn.assign(alphas.size(), 0);
  acc.ass_sum.assign(alphas.size(), 0.0);
  if (n_gt_ids == 0 && n_pred_ids == 0) return;

  // Global alignment: soft potential-match mass per (gt id, pred id).
  std::vector<std::vector<double>> potential(
      n_gt_ids, std::vector<double>(n_pred_ids, 0.0));
  for (std::size_t f = 0; f < d.gt.size(); ++f) {
    const auto& g = d.gt[f];
    const auto& p = d.pred[f];
    const auto& sim = d.sim[f];
    std::vector<double> row_sum(g.ids.size(), 0.0), col_sum(p.ids.size(), 0.0);
    for (std::size_t i = 0; i < g.ids.size(); ++i)
      for (std::size_t j = 0; j < p.ids.size(); ++j) {
        row_sum[i] += sim[i][j];
        col_sum[j] += sim[i][j];
      }
    for (std::size_t i = 0; i < g.ids.size(); ++i)
      for (std::size_t j = 0; j < p.ids.size(); ++j) {
        const double denom = row_sum[i] + col_sum[j] - sim[i][j];
        if (denom > 1e-12 && sim[i][j] > 0.0)
          potential[g.ids[i]][p.ids[j]] += sim[i][j] / denom;
      }
  }
  std::vector<std::vector<double>> align(n_gt_ids,
                                         std::vector<double>(n_pred_ids, 0.0));
  for (int i = 0; i < n_gt_ids; ++i)
    for (int j = 0; j < n_pred_ids; ++j) {
      const double denom =
          d.gt_presence[i] + d.pred_presence[j] - potential[i][j];
      if (denom > 0.0) align[i][j] = potential[i][j] / denom;
    }

  for (std::size_t a = 0; a < alphas.size(); ++a) {
    const double alpha = alphas[a];
    std::vector<std::vector<std::int64_t>> match_count(
        n_gt_ids, std::vector<std::int64_t>(n_pred_ids, 0));
    std::int64_t tp = 0, fn = 0, fp = 0;
    for (std::size_t f = 0; f < d.gt.size(); ++f) {
      const auto& g = d.gt[f];
      const auto& p = d.pred[f];
      const auto& sim = d.sim[f];
      std::vector<std::vector<double>> score(g.ids.size(),
                                             std::vector<double>(p.ids.size()));
      for (std::size_t i = 0; i < g.ids.size(); ++i)
        for (std::size_t j = 0; j < p.ids.size(); ++j)
          score[i][j] = align[g.ids[i]][p.ids[j]] * sim[i][j];
      const MatchResult m = optimal_match(score, 0.0);
      std::int64_t frame_tp = 0;
      for (const auto& pr : m.pairs) {
        if (sim[pr.gt][pr.pred] >= alpha - 1e-12) {
          ++frame_tp;
          ++match_count[g.ids[pr.gt]][p.ids[pr.pred]];
        }
      }
      tp += frame_tp;
      fn += static_cast<std::int64_t>(g.ids.size()) - frame_tp;
      fp += static_cast<std::int64_t>(p.ids.size()) - frame_tp;
    }
    double ass = 0.0;
    for (int i = 0; i < n_gt_ids; ++i)
      for (int j = 0; j < n_pred_ids; ++j) {
        const std::int64_t c = match_count[i][j];
        if (c == 0) continue;
        const double denom =
            static_cast<double>(d.gt_presence[i] + d.pred_presence[j] - c);
        ass += static_cast<double>(c) * (static_cast<double>(c) / denom);
      }
    acc.hota_tp[a] = tp;
    acc.hota_fn[a] = fn;
    acc.hota_fp[a] = fp;
    acc.ass_sum[a] = ass;
  }
}

void idf1_pass(const SeqData& d, const MotConfig& cfg, MotAccum& acc) {
  const int n_gt_ids = static_cast<int>(d.gt_presence.size());
  const int n_pred_ids = static_cast<int>(d.pred_presence.size());
  for (auto v : d.gt_presence) acc.gt_frames_total += v;
  for (auto v : d.pred_presence) acc.pred_frames_total += v;
  if (n_gt_ids == 0 || n_pred_ids == 0) return;

  // Frames where the pair overlaps at the matching threshold; the identity
  // bijection maximizes the total.
  std::vector<std::vector<double>> overlap(n_gt_ids,
                                           std::vector<double>(n_pred_ids, 0.0));
  for (std::size_t f = 0; f < d.gt.size(); ++f) {
    const auto& g = d.gt[f];
    const auto& p = d.pred[f];
    for (std::size_t i = 0; i < g.ids.size(); ++i)
      for (std::size_t j = 0; j < p.ids.size(); ++j)
        if (d.sim[f][i][j] >= cfg.iou_min) overlap[g.ids[i]][p.ids[j]] += 1.0;
  }
  const double scale = 1.0 / (static_cast<double>(d.gt.size()) + 1.0);
  std::vector<std::vector<double>> norm = overlap;
  for (auto& row : norm)
    for (auto& v : row) v *= scale;
  const MatchResult m = optimal_match(norm, 0.0);
  for (const auto& pr : m.pairs) {
    acc.idtp += static_cast<std::int64_t>(overlap[pr.gt][pr.pred] + 0.5);
  }
}

MotAccum eval_sequence(const TrackSet& pred, const TrackSet& gt,
                       const MotConfig& cfg) {
  const SeqData d = build_seq(pred, gt);
  MotAccum acc;
  clear_pass(d, cfg, acc);
  hota_pass(d, cfg, acc);
  idf1_pass(d, cfg, acc);
  return acc;
}

double hota_from_accum(const MotAccum& acc, std::size_t n_alphas) {
  if (acc.hota_tp.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t a = 0; a < n_alphas; ++a) {
    const double denom =
        static_cast<double>(acc.hota_tp[a] + acc.hota_fn[a] + acc.hota_fp[a]);
    const double det_a = denom > 0.0 ? acc.hota_tp[a] / denom : 0.0;
    const double ass_a =
        acc.hota_tp[a] > 0 ? acc.ass_sum[a] / acc.hota_tp[a] : 0.0;
    sum += std::sqrt(det_a * ass_a);
  }
  return sum / n_alphas;
}

MotReport report_from_accum(const MotAccum& acc, const MotConfig& cfg) {
  MotReport r;
  const auto n_alphas = cfg.hota_alphas().size();
  r.hota = hota_from_accum(acc, n_alphas);
  r.true_positives = acc.tp;
  r.false_positives = acc.fp;
  r.false_negatives = acc.fn;
  r.id_switches = acc.ids;
  r.fragmentations = acc.frag;
  r.gt_count = acc.gt_boxes;
  r.gt_track_count = acc.gt_tracks;
  r.mostly_tracked = acc.mt;
  r.mostly_lost = acc.ml;
  if (acc.gt_boxes > 0) {
    r.mota = 1.0 - static_cast<double>(acc.fn + acc.fp + acc.ids) / acc.gt_boxes;
    r.recall = static_cast<double>(acc.tp) / acc.gt_boxes;
  }
  if (acc.tp + acc.fp > 0)
    r.precision = static_cast<double>(acc.tp) / (acc.tp + acc.fp);
  if (acc.tp > 0) r.motp = acc.sum_one_minus_iou / acc.tp;
  const std::int64_t id_denom = acc.gt_frames_total + acc.pred_frames_total;
  if (id_denom > 0) r.idf1 = 2.0 * static_cast<double>(acc.idtp) / id_denom;
  return r;
}

}  // namespace

MotReport evaluate_mot(const TrackSet& pred, const TrackSet& gt,
                       const MotConfig& cfg) {
  return evaluate_mot_multi({{pred, gt}}, cfg);
}

MotReport evaluate_mot_multi(
    const std::vector<std::pair<TrackSet, TrackSet>>& pred_gt_pairs,
    const MotConfig& cfg) {
  MotAccum pooled;
  std::map<std::string, double> per_seq;
  for (const auto& [pred, gt] : pred_gt_pairs) {
    const MotAccum acc = eval_sequence(pred, gt, cfg);
    per_seq[gt.sequence_id] = hota_from_accum(acc, cfg.hota_alphas().size());
    pooled.add(acc);
  }
  MotReport r = report_from_accum(pooled, cfg);
  r.per_sequence_hota = std::move(per_seq);
  return r;
}

std::map<std::string, double> per_sequence_hota(
    const std::vector<std::pair<TrackSet, TrackSet>>& pred_gt_pairs,
    const MotConfig& cfg) {
  return evaluate_mot_multi(pred_gt_pairs, cfg).per_sequence_hota;
}

}  // namespace seaeval
