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

#include "seaeval/core.hpp"

namespace seaeval {

// Pinhole intrinsics. Pixel (u, v) rays are cast through pixel centers
// (u + 0.5, v + 0.5).
struct CameraModel {
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 0;
  int height = 0;

  bool valid() const {
    return fx > 0.0 && fy > 0.0 && width > 0 && height > 0 && cx >= 0.0 &&
           cx <= width && cy >= 0.0 && cy <= height;
  }
};

// Radial hazard area on the water plane around the vehicle's nadir point.
// Default radius: 15 m = 1.5 m/s average speed over a 10 s horizon.
struct DangerZoneSpec {
  double radius = 15.0;        // meters
  double camera_height = 1.0;  // meters above the water plane
  double roll = 0.0;           // degrees, about the optical axis
  double pitch = 0.0;          // degrees, positive pitches the camera down
};

double iou(const BBox& a, const BBox& b);

// Projects the danger zone into the image: a pixel is in-zone when its
// back-projected ray hits the water plane within `radius` of the nadir
// point. Rays at or above the horizon never hit the plane and are out.
//
// With `strict` set, throws NoGroundVisible when not a single pixel ray
// intersects the plane; the default returns the all-out mask instead.
SegmentationRaster project_danger_zone(const CameraModel& cam,
                                       const DangerZoneSpec& zone,
                                       bool strict = false);

// Fraction of the rasterized box pixels marked in-zone. Boxes are clipped to
// the mask; an empty rasterization yields 0.
double in_zone_fraction(const BBox& box, const SegmentationRaster& zone_mask);

}  // namespace seaeval
