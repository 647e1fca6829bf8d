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

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "seaeval/core.hpp"
#include "seaeval/geometry.hpp"

namespace seaeval {

// Portable 64-bit generator (splitmix64). Constants fixed so fixtures are
// reproducible bit-for-bit across implementations:
//   state += 0x9E3779B97F4A7C15
//   z = state; z = (z ^ z>>30) * 0xBF58476D1CE4E5B9
//   z = (z ^ z>>27) * 0x94D049BB133111EB; return z ^ z>>31
class Rng64 {
 public:
  explicit Rng64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  double uniform01();  // [0, 1), 53-bit mantissa
  double uniform(double lo, double hi);
  int uniform_int(int lo, int hi);  // inclusive bounds
  double normal(double mean = 0.0, double sigma = 1.0);  // Box-Muller

  // Derives an independent stream; used to keep per-record draws fixed
  // regardless of branching.
  Rng64 fork(std::uint64_t salt) const;

 private:
  std::uint64_t state_;
};

enum class MotionKind { kStatic, kPan, kTilt, kTeleport };

MotionKind motion_from_string(const std::string& name);

struct ScenarioSpec {
  std::uint64_t seed = 1;
  int frames = 10;
  std::vector<int> objects_per_class = {2, 1};  // indexed by class id
  MotionKind motion = MotionKind::kStatic;
  double altitude_start = 1.5;  // meters; camera height profile over frames
  double altitude_end = 1.5;
  int width = 320;
  int height = 240;
};

struct ScenarioData {
  std::vector<std::string> frames;
  std::vector<GroundTruthRecord> gts;
  TrackSet gt_tracks;
  FrameMetaMap meta;
  WaterEdgeMap edges;
  std::map<std::string, SegmentationRaster> zone_masks;
  CameraModel camera;
  DangerZoneSpec zone;  // camera_height follows the altitude profile per frame

  // Rasterizes the ground truth of one frame: sky above the water edge,
  // water below, obstacle pixels inside GT boxes.
  SegmentationRaster perfect_mask(const std::string& frame_id) const;
};

// Deterministic multi-track scenario with metadata inside the documented
// ranges, a full-width water edge, and per-frame danger-zone masks. The same
// seed always produces byte-identical artifacts.
ScenarioData generate_scenario(const ScenarioSpec& spec);

struct PerturbationSpec {
  double drop_rate = 0.0;
  double duplicate_rate = 0.0;
  double shift_sigma = 0.0;  // px; each box corner shifts independently
  double class_flip_rate = 0.0;
  double score_noise = 0.0;
  std::uint64_t seed = 0x5eed;
};

// Derives predictions from ground truth copies (never mutates the input).
// The zero spec returns the ground truth verbatim with score 1.0.
std::vector<DetectionRecord> perturb(const std::vector<GroundTruthRecord>& gts,
                                     const PerturbationSpec& spec,
                                     const ClassTable& classes);

// TrackSet variant for tracking fixtures; drops and shifts apply per entry,
// duplicates get fresh track ids.
TrackSet perturb_tracks(const TrackSet& gt_tracks, const PerturbationSpec& spec);

// Writes every artifact of a scenario (and optional perturbed predictions)
// into a directory: gt.json, meta.json, edges.json, gt.csv, zone/<frame>.pgm,
// masks/<frame>.pgm, preds.json, pred.csv.
void write_scenario_dir(const ScenarioData& data, const std::string& dir,
                        const std::vector<DetectionRecord>* preds = nullptr,
                        const TrackSet* pred_tracks = nullptr);

}  // namespace seaeval
