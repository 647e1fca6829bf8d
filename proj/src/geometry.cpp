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

#include "seaeval/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "seaeval/errors.hpp"

namespace seaeval {

double iou(const BBox& a, const BBox& b) {
  const double ix = std::min(a.x2(), b.x2()) - std::max(a.x, b.x);
  const double iy = std::min(a.y2(), b.y2()) - std::max(a.y, b.y);
  if (ix <= 0.0 || iy <= 0.0) return 0.0;
  const double inter = ix * iy;
  const double uni = a.area() + b.area() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

namespace {

constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

using Mat3 = std::array<std::array<double, 3>, 3>;
using Vec3 = std::array<double, 3>;

Mat3 matmul(const Mat3& a, const Mat3& b) {
  Mat3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) r[i][j] += a[i][k] * b[k][j];
  return r;
}

Vec3 apply(const Mat3& m, const Vec3& v) {
  return {m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
          m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
          m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2]};
}

}  // namespace

// Camera-to-world rotation for the zone projection. World frame: X forward,
// Y right, Z up, camera at (0, 0, h). Camera frame: +Z optical axis,
// +X image-right, +Y image-down; at roll = pitch = 0 the camera looks
// horizontally forward. Positive pitch rotates the view down toward the
// water; roll spins about the optical axis. Yaw is irrelevant: the zone is
// radially symmetric about the nadir point.
Mat3 zone_camera_rotation(double roll_deg, double pitch_deg) {
  const double cr = std::cos(roll_deg * kDegToRad);
  const double sr = std::sin(roll_deg * kDegToRad);
  const double cp = std::cos(pitch_deg * kDegToRad);
  const double sp = std::sin(pitch_deg * kDegToRad);

  // Base: cam_x -> world Y, cam_y -> world -Z, cam_z -> world X.
  const Mat3 base{{{0, 0, 1}, {1, 0, 0}, {0, -1, 0}}};
  // Roll about the camera z-axis, applied in camera coordinates.
  const Mat3 roll{{{cr, -sr, 0}, {sr, cr, 0}, {0, 0, 1}}};
  // Pitch-down about the world Y (right) axis.
  const Mat3 pitch{{{cp, 0, sp}, {0, 1, 0}, {-sp, 0, cp}}};
  return matmul(pitch, matmul(base, roll));
}

SegmentationRaster project_danger_zone(const CameraModel& cam,
                                       const DangerZoneSpec& zone,
                                       bool strict) {
  if (!cam.valid()) throw InputError("invalid camera model");
  if (zone.radius <= 0.0 || zone.camera_height <= 0.0) {
    throw InputError("zone radius and camera height must be positive");
  }

  const Mat3 R = zone_camera_rotation(zone.roll, zone.pitch);
  const double h = zone.camera_height;
  const double r2 = zone.radius * zone.radius;

  SegmentationRaster mask(cam.width, cam.height, 0);
  bool any_ground = false;

  // Per column, the world ray direction is affine in the pixel row:
  //   d(v) = a + pv * b,  pv = (v + 0.5 - cy) / fy.
  // The ray hits the plane when d_z < 0, at ground range^2
  //   h^2 (d_x^2 + d_y^2) / d_z^2, so in-zone is the quadratic condition
  //   Q(pv) = r^2 d_z^2 - h^2 (d_x^2 + d_y^2) >= 0 on the d_z < 0 side.
  // Rows are classified by evaluating Q at each pv; the arithmetic per pixel
  // stays O(1) with the affine pieces hoisted out of the loop.
  const Vec3 b = apply(R, {0.0, 1.0, 0.0});
  for (int u = 0; u < cam.width; ++u) {
    const double pu = (u + 0.5 - cam.cx) / cam.fx;
    const Vec3 a = apply(R, {pu, 0.0, 1.0});
    for (int v = 0; v < cam.height; ++v) {
      const double pv = (v + 0.5 - cam.cy) / cam.fy;
      const double dx = a[0] + pv * b[0];
      const double dy = a[1] + pv * b[1];
      const double dz = a[2] + pv * b[2];
      if (dz >= 0.0) continue;  // at or above the horizon
      any_ground = true;
      const double q = r2 * dz * dz - h * h * (dx * dx + dy * dy);
      if (q >= 0.0) mask.set(u, v, 1);
    }
  }

  if (!any_ground && strict) {
    throw NoGroundVisible("no pixel ray intersects the water plane");
  }
  return mask;
}

double in_zone_fraction(const BBox& box, const SegmentationRaster& zone_mask) {
  const int x0 = std::max(0, raster_round(box.x));
  const int y0 = std::max(0, raster_round(box.y));
  const int x1 = std::min(zone_mask.width, raster_round(box.x2()));
  const int y1 = std::min(zone_mask.height, raster_round(box.y2()));
  if (x1 <= x0 || y1 <= y0) return 0.0;

  std::int64_t in = 0;
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      if (zone_mask.at(x, y) != 0) ++in;
    }
  }
  const std::int64_t total =
      static_cast<std::int64_t>(x1 - x0) * static_cast<std::int64_t>(y1 - y0);
  return static_cast<double>(in) / static_cast<double>(total);
}

}  // namespace seaeval
