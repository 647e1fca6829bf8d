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

#include "seaeval/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "seaeval/errors.hpp"
#include "seaeval/io_formats.hpp"

namespace seaeval {

std::uint64_t Rng64::next() {
  state_ += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double Rng64::uniform01() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double Rng64::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform01();
}

int Rng64::uniform_int(int lo, int hi) {
  return lo + static_cast<int>(uniform01() * (hi - lo + 1));
}

double Rng64::normal(double mean, double sigma) {
  // Box-Muller; two fresh uniforms per draw keeps the stream branch-free.
  const double u1 = std::max(uniform01(), 1e-300);
  const double u2 = uniform01();
  return mean + sigma * std::sqrt(-2.0 * std::log(u1)) *
                    std::cos(2.0 * 3.14159265358979323846 * u2);
}

Rng64 Rng64::fork(std::uint64_t salt) const {
  Rng64 child(state_ ^ (salt * 0xD2B74407B1CE6E93ull + 0x9E3779B97F4A7C15ull));
  child.next();
  return child;
}

MotionKind motion_from_string(const std::string& name) {
  if (name == "static") return MotionKind::kStatic;
  if (name == "pan") return MotionKind::kPan;
  if (name == "tilt") return MotionKind::kTilt;
  if (name == "teleport") return MotionKind::kTeleport;
  throw InputError("unknown motion kind: " + name);
}

namespace {

std::string frame_name(int t) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "frame_%06d", t);
  return buf;
}

ClassTable table_for(std::size_t n_classes) {
  switch (n_classes) {
    case 1: return ClassTable::uav_mot();
    case 3: return ClassTable::usv();
    case 5: return ClassTable::uav_od();
    default: {
      std::vector<std::string> names;
      for (std::size_t i = 0; i < n_classes; ++i)
        names.push_back("class" + std::to_string(i));
      return ClassTable(names);
    }
  }
}

}  // namespace

SegmentationRaster ScenarioData::perfect_mask(const std::string& frame_id) const {
  auto eit = edges.find(frame_id);
  if (eit == edges.end()) throw InputError("unknown frame: " + frame_id);
  const int W = camera.width, H = camera.height;
  SegmentationRaster mask(W, H, SegmentationRaster::kWater);
  const int edge_row =
      raster_round(eit->second.polylines.at(0).at(0).second);
  for (int y = 0; y < std::min(edge_row, H); ++y)
    for (int x = 0; x < W; ++x) mask.set(x, y, SegmentationRaster::kSky);
  for (const auto& g : gts) {
    if (g.frame_id != frame_id) continue;
    const int x0 = std::max(0, raster_round(g.bbox.x));
    const int y0 = std::max(0, raster_round(g.bbox.y));
    const int x1 = std::min(W, raster_round(g.bbox.x2()));
    const int y1 = std::min(H, raster_round(g.bbox.y2()));
    for (int y = y0; y < y1; ++y)
      for (int x = x0; x < x1; ++x) mask.set(x, y, SegmentationRaster::kObstacle);
  }
  return mask;
}

ScenarioData generate_scenario(const ScenarioSpec& spec) {
  if (spec.frames <= 0 || spec.width < 64 || spec.height < 64) {
    throw InputError("scenario needs frames > 0 and dims >= 64");
  }
  ScenarioData data;
  const int W = spec.width, H = spec.height;
  data.camera = {1.2 * H, 1.2 * H, W / 2.0, H / 2.0, W, H};
  data.zone = {15.0, std::max(0.1, spec.altitude_start), 0.0, 30.0};

  const int edge_row = H * 35 / 100;
  const int box_max = 36;

  // Constant per-frame offsets keep panning/tilting fixtures verifiable by a
  // single subtraction; the spawn band leaves room for the whole sweep.
  int dx = 0, dy = 0;
  if (spec.motion == MotionKind::kPan) dx = 2;
  if (spec.motion == MotionKind::kTilt) dy = 1;
  const int x_room = W - 4 - box_max - dx * spec.frames;
  const int y_lo = edge_row + 4;
  const int y_room = H - 4 - box_max - dy * spec.frames - y_lo;
  if (x_room < 4 || y_room < 4) {
    throw InputError("scenario dims too small for the motion sweep");
  }

  Rng64 rng(spec.seed);
  struct Obj {
    int cls;
    double x, y, w, h;
  };
  std::vector<Obj> objects;
  for (std::size_t c = 0; c < spec.objects_per_class.size(); ++c) {
    for (int k = 0; k < spec.objects_per_class[c]; ++k) {
      Obj o;
      o.cls = static_cast<int>(c);
      o.w = rng.uniform_int(10, box_max);
      o.h = rng.uniform_int(10, box_max);
      o.x = 2 + rng.uniform_int(0, x_room);
      o.y = y_lo + rng.uniform_int(0, y_room);
      objects.push_back(o);
    }
  }

  data.gt_tracks.sequence_id = "seq0";
  std::int64_t ann_id = 1;
  for (int t = 0; t < spec.frames; ++t) {
    const std::string frame = frame_name(t);
    data.frames.push_back(frame);
    data.gt_tracks.frames.push_back(frame);

    const double alt =
        spec.frames > 1
            ? spec.altitude_start + (spec.altitude_end - spec.altitude_start) *
                                        t / (spec.frames - 1)
            : spec.altitude_start;

    for (std::size_t k = 0; k < objects.size(); ++k) {
      Obj o = objects[k];
      if (spec.motion == MotionKind::kTeleport) {
        Rng64 jump = rng.fork(1000003ull * (t + 1) + k);
        o.x = 2 + jump.uniform_int(0, x_room);
        o.y = y_lo + jump.uniform_int(0, y_room);
      } else {
        o.x += dx * t;
        o.y += dy * t;
      }
      GroundTruthRecord g;
      g.frame_id = frame;
      g.bbox = {o.x, o.y, o.w, o.h};
      g.class_id = o.cls;
      g.id = ann_id++;
      data.gts.push_back(g);
      data.gt_tracks.entries.push_back(
          {frame, static_cast<std::int64_t>(k), g.bbox, 1.0, o.cls});
    }

    FrameMeta m;
    m.altitude = alt;
    m.gimbal_pitch = 30.0;
    m.uav_roll = 0.0;
    m.uav_pitch = 0.0;
    m.uav_yaw = spec.motion == MotionKind::kPan
                    ? std::min(180.0, -30.0 + 3.0 * t)
                    : 0.0;
    m.speed_x = spec.motion == MotionKind::kStatic ? 0.0 : 1.5;
    m.speed_y = 0.0;
    m.speed_z = 0.0;
    m.latitude = 45.5;
    m.longitude = 13.7;
    m.camera_id = "cam0";
    char ts[40];
    std::snprintf(ts, sizeof(ts), "2022-09-01T10:%02d:%02dZ", t / 60, t % 60);
    m.timestamp = ts;
    data.meta[frame] = m;

    WaterEdge edge;
    edge.polylines.push_back(
        {{0.0, static_cast<double>(edge_row)},
         {static_cast<double>(W - 1), static_cast<double>(edge_row)}});
    data.edges[frame] = edge;

    DangerZoneSpec zone = data.zone;
    zone.camera_height = std::max(0.1, alt);
    data.zone_masks[frame] = project_danger_zone(data.camera, zone);
  }
  return data;
}

std::vector<DetectionRecord> perturb(const std::vector<GroundTruthRecord>& gts,
                                     const PerturbationSpec& spec,
                                     const ClassTable& classes) {
  const Rng64 base(spec.seed);
  std::vector<DetectionRecord> preds;
  preds.reserve(gts.size());
  const int n_classes = static_cast<int>(classes.size());

  auto derive = [&](Rng64& rng, const GroundTruthRecord& g) {
    DetectionRecord d;
    d.frame_id = g.frame_id;
    d.class_id = g.class_id;
    d.bbox = g.bbox;
    if (spec.shift_sigma > 0.0) {
      // Both corners shift independently; this displaces the center by
      // N(0, sigma/sqrt(2)) per axis and the size diagonal by
      // N(0, sigma*sqrt(2)) per axis.
      const double x1 = g.bbox.x + rng.normal(0.0, spec.shift_sigma);
      const double y1 = g.bbox.y + rng.normal(0.0, spec.shift_sigma);
      const double x2 = g.bbox.x2() + rng.normal(0.0, spec.shift_sigma);
      const double y2 = g.bbox.y2() + rng.normal(0.0, spec.shift_sigma);
      d.bbox = {x1, y1, std::max(0.5, x2 - x1), std::max(0.5, y2 - y1)};
    }
    if (spec.class_flip_rate > 0.0 && n_classes > 1 &&
        rng.uniform01() < spec.class_flip_rate) {
      const int offset = 1 + static_cast<int>(rng.uniform01() * (n_classes - 1));
      d.class_id = (g.class_id + offset) % n_classes;
    }
    d.score = 1.0;
    if (spec.score_noise > 0.0) {
      d.score = std::clamp(1.0 - std::abs(rng.normal(0.0, spec.score_noise)),
                           0.0, 1.0);
    }
    return d;
  };

  for (std::size_t i = 0; i < gts.size(); ++i) {
    Rng64 rng = base.fork(i);
    if (spec.drop_rate > 0.0 && rng.uniform01() < spec.drop_rate) continue;
    preds.push_back(derive(rng, gts[i]));
    if (spec.duplicate_rate > 0.0 && rng.uniform01() < spec.duplicate_rate) {
      Rng64 dup = base.fork(i ^ 0x8000000000000000ull);
      preds.push_back(derive(dup, gts[i]));
    }
  }
  return preds;
}

TrackSet perturb_tracks(const TrackSet& gt_tracks, const PerturbationSpec& spec) {
  const Rng64 base(spec.seed);
  TrackSet out;
  out.sequence_id = gt_tracks.sequence_id;
  out.frames = gt_tracks.frames;
  std::int64_t max_id = 0;
  for (const auto& e : gt_tracks.entries) max_id = std::max(max_id, e.track_id);

  for (std::size_t i = 0; i < gt_tracks.entries.size(); ++i) {
    Rng64 rng = base.fork(i);
    if (spec.drop_rate > 0.0 && rng.uniform01() < spec.drop_rate) continue;
    TrackEntry e = gt_tracks.entries[i];
    if (spec.shift_sigma > 0.0) {
      const double x1 = e.bbox.x + rng.normal(0.0, spec.shift_sigma);
      const double y1 = e.bbox.y + rng.normal(0.0, spec.shift_sigma);
      const double x2 = e.bbox.x2() + rng.normal(0.0, spec.shift_sigma);
      const double y2 = e.bbox.y2() + rng.normal(0.0, spec.shift_sigma);
      e.bbox = {x1, y1, std::max(0.5, x2 - x1), std::max(0.5, y2 - y1)};
    }
    e.score = 1.0;
    if (spec.score_noise > 0.0) {
      e.score = std::clamp(1.0 - std::abs(rng.normal(0.0, spec.score_noise)),
                           0.0, 1.0);
    }
    out.entries.push_back(e);
    if (spec.duplicate_rate > 0.0 && rng.uniform01() < spec.duplicate_rate) {
      TrackEntry d = e;
      d.track_id = ++max_id;  // fresh identity for the spurious twin
      d.bbox.x += 1.0;
      out.entries.push_back(d);
    }
  }
  return out;
}

void write_scenario_dir(const ScenarioData& data, const std::string& dir,
                        const std::vector<DetectionRecord>* preds,
                        const TrackSet* pred_tracks) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  fs::create_directories(dir + "/masks");
  fs::create_directories(dir + "/zone");

  auto write_file = [](const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot write " + path);
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
  };

  std::size_t max_class = 0;
  for (const auto& g : data.gts)
    max_class = std::max(max_class, static_cast<std::size_t>(g.class_id) + 1);
  const ClassTable classes = table_for(std::max<std::size_t>(1, max_class));

  CocoGtFile gt_file;
  for (const auto& f : data.frames) gt_file.images.push_back({f, json::object()});
  gt_file.records = data.gts;
  gt_file.record_extras.assign(data.gts.size(), json::object());
  gt_file.classes = classes;
  for (std::size_t i = 0; i < classes.size(); ++i)
    gt_file.category_ids.push_back(static_cast<int>(i) + 1);
  write_file(dir + "/gt.json", write_coco_gt_json(gt_file));
  write_file(dir + "/meta.json", write_meta_sidecar(data.meta));
  write_file(dir + "/edges.json", write_edges_json(data.edges));

  // The csv interchange uses 1-based integer frame numbers.
  std::map<std::string, std::string> frame_number;
  for (std::size_t i = 0; i < data.frames.size(); ++i)
    frame_number[data.frames[i]] = std::to_string(i + 1);
  auto renumber = [&](const TrackSet& ts) {
    TrackSet out = ts;
    for (auto& f : out.frames) f = frame_number.at(f);
    for (auto& e : out.entries) e.frame_id = frame_number.at(e.frame_id);
    return out;
  };
  write_file(dir + "/gt.csv", write_mot_csv(renumber(data.gt_tracks)));

  for (const auto& f : data.frames) {
    write_file(dir + "/masks/" + f + ".pgm", write_mask_pgm(data.perfect_mask(f)));
    write_file(dir + "/zone/" + f + ".pgm",
               write_mask_pgm(data.zone_masks.at(f)));
  }

  if (preds) {
    CocoDetFile det;
    det.records = *preds;
    det.record_extras.assign(preds->size(), json::object());
    write_file(dir + "/preds.json",
               write_coco_det_json(det, gt_file.category_ids));
  }
  if (pred_tracks) {
    write_file(dir + "/pred.csv", write_mot_csv(renumber(*pred_tracks)));
  }
}

}  // namespace seaeval
