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

#include "seaeval/core.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "seaeval/errors.hpp"

namespace seaeval {

std::optional<double> FrameMeta::numeric(const std::string& key) const {
  if (key == "altitude") return altitude;
  if (key == "gimbal_pitch") return gimbal_pitch;
  if (key == "uav_roll") return uav_roll;
  if (key == "uav_pitch") return uav_pitch;
  if (key == "uav_yaw") return uav_yaw;
  if (key == "speed_x") return speed_x;
  if (key == "speed_y") return speed_y;
  if (key == "speed_z") return speed_z;
  if (key == "latitude") return latitude;
  if (key == "longitude") return longitude;
  return std::nullopt;
}

ClassTable::ClassTable(std::vector<std::string> names) : names_(std::move(names)) {
  std::set<std::string> seen;
  for (const auto& n : names_) {
    if (!seen.insert(n).second) {
      throw InputError("duplicate class name: " + n);
    }
  }
}

ClassTable ClassTable::uav_od() {
  return ClassTable({"swimmer", "boat", "jetski", "life_saving_appliance", "buoy"});
}

ClassTable ClassTable::uav_mot() { return ClassTable({"object"}); }

ClassTable ClassTable::usv() { return ClassTable({"vessel", "person", "other"}); }

ClassTable ClassTable::binary() { return ClassTable({"non-water"}); }

const std::string& ClassTable::name(int class_id) const {
  if (!contains(class_id)) {
    throw UnknownClass("class id out of table: " + std::to_string(class_id));
  }
  return names_[static_cast<std::size_t>(class_id)];
}

std::optional<int> ClassTable::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return static_cast<int>(i);
  }
  return std::nullopt;
}

std::optional<std::string> meta_range_violation(const std::string& key,
                                                double value) {
  struct Range {
    const char* key;
    double lo;
    double hi;
  };
  // Documented capture-metadata ranges; infinities mean unbounded above.
  static const Range kRanges[] = {
      {"altitude", 0.0, std::numeric_limits<double>::infinity()},
      {"gimbal_pitch", 0.0, 90.0},
      {"uav_roll", -90.0, 90.0},
      {"uav_pitch", -90.0, 90.0},
      {"uav_yaw", -180.0, 180.0},
      {"speed_x", 0.0, std::numeric_limits<double>::infinity()},
      {"speed_y", 0.0, std::numeric_limits<double>::infinity()},
      {"speed_z", 0.0, std::numeric_limits<double>::infinity()},
      {"latitude", -90.0, 90.0},
      {"longitude", -90.0, 90.0},
  };
  if (!std::isfinite(value)) return "non-finite value for " + key;
  for (const auto& r : kRanges) {
    if (key == r.key) {
      if (value < r.lo || value > r.hi) {
        std::ostringstream os;
        os << key << "=" << value << " outside [" << r.lo << ", " << r.hi << "]";
        return os.str();
      }
      return std::nullopt;
    }
  }
  return std::nullopt;  // unknown keys are not range-checked
}

ValidationReport validate_dataset(const std::vector<std::string>& frames,
                                  const std::vector<GroundTruthRecord>& gts,
                                  const FrameMetaMap& meta) {
  ValidationReport report;
  std::set<std::string> manifest(frames.begin(), frames.end());
  std::set<std::int64_t> ids;

  for (const auto& g : gts) {
    if (!g.bbox.valid()) {
      report.violations.push_back({"degenerate bbox", g.frame_id,
                                   "w=" + std::to_string(g.bbox.w) +
                                       " h=" + std::to_string(g.bbox.h)});
    }
    if (!manifest.count(g.frame_id)) {
      report.violations.push_back(
          {"unknown frame", g.frame_id, "record references frame not in manifest"});
    }
    if (g.id >= 0 && !ids.insert(g.id).second) {
      report.violations.push_back(
          {"duplicate annotation id", g.frame_id, std::to_string(g.id)});
    }
  }

  static const char* kNumericKeys[] = {
      "altitude", "gimbal_pitch", "uav_roll", "uav_pitch", "uav_yaw",
      "speed_x",  "speed_y",      "speed_z",  "latitude",  "longitude"};
  for (const auto& [frame_id, m] : meta) {
    for (const char* key : kNumericKeys) {
      if (auto v = m.numeric(key)) {
        if (auto msg = meta_range_violation(key, *v)) {
          report.violations.push_back({"out-of-range meta", frame_id, *msg});
        }
      }
    }
    if (!manifest.empty() && !manifest.count(frame_id)) {
      report.violations.push_back(
          {"unknown frame", frame_id, "meta for frame not in manifest"});
    }
  }
  return report;
}

}  // namespace seaeval
