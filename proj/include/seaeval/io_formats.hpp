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

#include <json.hpp>

#include "seaeval/core.hpp"
#include "seaeval/geometry.hpp"
#include "seaeval/usv_det.hpp"
#include "seaeval/usv_seg.hpp"
#include "seaeval/mot_metrics.hpp"
#include "seaeval/od_metrics.hpp"

namespace seaeval {

using json = nlohmann::json;

inline const char* kFormatVersion = "1";

// Scalars in every report file are rounded to 4 decimals at serialization;
// full precision stays in memory.
double round4(double v);

// Sorted keys, two-space indent, trailing newline. All writers in this
// module emit through here so identical data means identical bytes.
std::string canonical_json(const json& j);

// ---------------------------------------------------------------------------
// COCO-style detection interchange

struct CocoImage {
  std::string id;      // opaque frame id; written numeric when integral
  json extra;          // unknown fields, preserved verbatim
};

struct CocoGtFile {
  std::vector<CocoImage> images;           // manifest order
  std::vector<GroundTruthRecord> records;
  std::vector<json> record_extras;         // parallel to records
  ClassTable classes;
  std::vector<int> category_ids;           // original ids, parallel to classes
  json top_extra;

  std::vector<std::string> frames() const;
  std::map<int, int> category_to_class() const;
};

struct CocoDetFile {
  std::vector<DetectionRecord> records;
  std::vector<json> record_extras;
};

CocoGtFile parse_coco_gt_json(const std::string& bytes);
std::string write_coco_gt_json(const CocoGtFile& file);

// `category_to_class` maps file category ids onto class table indices; an
// empty map means ids are already class indices. Unknown ids throw.
CocoDetFile parse_coco_det_json(const std::string& bytes,
                                const std::map<int, int>& category_to_class);
std::string write_coco_det_json(const CocoDetFile& file,
                                const std::vector<int>& category_ids);

// ---------------------------------------------------------------------------
// Tracking interchange: "frame,id,x,y,w,h,score,class,visibility" lines.

struct MotCsvFile {
  TrackSet tracks;
  std::vector<std::string> warnings;  // e.g. non-monotone input was sorted
};

MotCsvFile parse_mot_csv(const std::string& bytes,
                         const std::string& sequence_id);
std::string write_mot_csv(const TrackSet& tracks);

// ---------------------------------------------------------------------------
// Masks: binary portable graymap, maxval 255, class indices validated.

SegmentationRaster read_mask_pgm(const std::string& bytes);
std::string write_mask_pgm(const SegmentationRaster& raster);

// ---------------------------------------------------------------------------
// Frame metadata sidecar: {"format_version":"1","frames":{id:{...}}}.
// Out-of-range values are dropped with a warning; the record is kept.

struct MetaFile {
  FrameMetaMap meta;
  std::vector<std::string> warnings;
};

MetaFile read_meta_sidecar(const std::string& bytes);
std::string write_meta_sidecar(const FrameMetaMap& meta);

// ---------------------------------------------------------------------------
// Water-edge ground truth as JSON polylines per frame.

WaterEdgeMap read_edges_json(const std::string& bytes);
std::string write_edges_json(const WaterEdgeMap& edges);

// Static zone projection config: camera intrinsics plus zone parameters.
struct ZoneProjection {
  CameraModel camera;
  DangerZoneSpec zone;
};

ZoneProjection read_zone_spec_json(const std::string& bytes);
std::string write_zone_spec_json(const ZoneProjection& spec);

// ---------------------------------------------------------------------------
// Report serialization (canonical JSON bodies for files and the service).

json od_report_to_json(const OdReport& report);
json tide_report_to_json(const TideReport& report);
json mot_report_to_json(const MotReport& report);
json seg_report_to_json(const SegReport& report);
json usv_det_report_to_json(const UsvDetReport& report);
std::string pr_curves_to_csv(const OdReport& report, const ClassTable& classes);

}  // namespace seaeval
