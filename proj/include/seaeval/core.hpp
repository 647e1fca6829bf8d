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

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace seaeval {

// Rounding used for every box-to-pixel conversion in the toolkit.
// Half-up: raster_round(0.5) == 1, raster_round(-0.5) == 0.
inline int raster_round(double v) {
  return static_cast<int>(std::floor(v + 0.5));
}

// Axis-aligned box, continuous (sub-pixel) coordinates, top-left origin.
struct BBox {
  double x = 0.0;  // left
  double y = 0.0;  // top
  double w = 0.0;
  double h = 0.0;

  double area() const { return w * h; }
  double x2() const { return x + w; }
  double y2() const { return y + h; }
  double cx() const { return x + 0.5 * w; }
  double cy() const { return y + 0.5 * h; }

  bool valid() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(w) &&
           std::isfinite(h) && w > 0.0 && h > 0.0;
  }
};

struct DetectionRecord {
  std::string frame_id;
  BBox bbox;
  int class_id = 0;
  double score = 0.0;
};

struct GroundTruthRecord {
  std::string frame_id;
  BBox bbox;
  int class_id = 0;
  std::int64_t id = -1;     // annotation id, unique within a dataset
  bool ignore = false;      // blackened / ambiguous region
  bool exhaustive = true;   // frame-level flag copied per record
};

// Per-frame capture metadata. Every field is optional; absent means the
// source carried no value, never a sentinel number.
struct FrameMeta {
  std::optional<double> altitude;      // meters, >= 0
  std::optional<double> gimbal_pitch;  // degrees, [0, 90]
  std::optional<double> uav_roll;      // degrees, [-90, 90]
  std::optional<double> uav_pitch;     // degrees, [-90, 90]
  std::optional<double> uav_yaw;       // degrees, [-180, 180]
  std::optional<double> speed_x;       // m/s, >= 0
  std::optional<double> speed_y;       // m/s, >= 0
  std::optional<double> speed_z;       // m/s, >= 0
  std::optional<double> latitude;      // degrees, [-90, 90]
  std::optional<double> longitude;     // degrees, [-90, 90]
  std::optional<std::string> camera_id;
  std::optional<std::string> timestamp;  // ISO 8601

  std::optional<double> numeric(const std::string& key) const;
};

using FrameMetaMap = std::map<std::string, FrameMeta>;

// Ordered category table. Class ids used throughout the toolkit are indices
// into this table.
class ClassTable {
 public:
  ClassTable() = default;
  explicit ClassTable(std::vector<std::string> names);

  static ClassTable uav_od();   // swimmer, boat, jetski, life_saving_appliance, buoy
  static ClassTable uav_mot();  // single "object" class
  static ClassTable usv();      // vessel, person, other
  static ClassTable binary();   // single "non-water" class

  // Collapses every class onto "non-water". Idempotent.
  ClassTable to_binary() const { return binary(); }

  std::size_t size() const { return names_.size(); }
  const std::string& name(int class_id) const;
  const std::vector<std::string>& names() const { return names_; }
  bool contains(int class_id) const {
    return class_id >= 0 && static_cast<std::size_t>(class_id) < names_.size();
  }
  std::optional<int> index_of(const std::string& name) const;

 private:
  std::vector<std::string> names_;
};

struct TrackEntry {
  std::string frame_id;
  std::int64_t track_id = 0;
  BBox bbox;
  double score = 1.0;
  int class_id = 0;
};

// Identity-labeled box stream for one sequence. `frames` is the explicit
// frame manifest; entries may only reference manifest frames and the
// (frame_id, track_id) pairs are unique.
struct TrackSet {
  std::string sequence_id;
  std::vector<std::string> frames;
  std::vector<TrackEntry> entries;
};

// Per-pixel class raster, row-major. Doubles as a binary in/out mask for the
// danger zone (0 = out, 1 = in).
struct SegmentationRaster {
  static constexpr std::uint8_t kObstacle = 0;
  static constexpr std::uint8_t kWater = 1;
  static constexpr std::uint8_t kSky = 2;
  static constexpr std::uint8_t kIgnore = 4;

  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;

  SegmentationRaster() = default;
  SegmentationRaster(int w, int h, std::uint8_t fill = kWater)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

  std::uint8_t at(int x, int y) const {
    return data[static_cast<std::size_t>(y) * width + x];
  }
  void set(int x, int y, std::uint8_t v) {
    data[static_cast<std::size_t>(y) * width + x] = v;
  }
  bool in_bounds(int x, int y) const {
    return x >= 0 && x < width && y >= 0 && y < height;
  }
  static bool valid_class(std::uint8_t v) {
    return v == kObstacle || v == kWater || v == kSky || v == kIgnore;
  }
};

using Polyline = std::vector<std::pair<double, double>>;  // (x, y) vertices

// Water-obstacle boundary annotation for one frame: one or more polylines
// drawn over the lower edge of static obstacles.
struct WaterEdge {
  std::vector<Polyline> polylines;
  bool empty() const { return polylines.empty(); }
};

using WaterEdgeMap = std::map<std::string, WaterEdge>;

struct Violation {
  std::string code;
  std::string frame_id;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

// Report-only dataset sanity check: degenerate boxes, out-of-range metadata,
// duplicate annotation ids, records referencing frames missing from the
// manifest. Never throws.
ValidationReport validate_dataset(const std::vector<std::string>& frames,
                                  const std::vector<GroundTruthRecord>& gts,
                                  const FrameMetaMap& meta);

// Table-driven range check shared by validate_dataset and the meta parser.
// Returns an error string for `value` under `key`, or nullopt when in range.
std::optional<std::string> meta_range_violation(const std::string& key,
                                                double value);

}  // namespace seaeval
