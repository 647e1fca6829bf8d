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

// Shared test fixture: disjoint detection "gadgets" laid out on a grid whose
// pooled counts hit the published leader components exactly:
//   f1_1 = 1378/5200 = 0.265, f1_2 = 2080/5200 = 0.400,
//   f1_3 = 1946/2000 = 0.973, f1_avg = 0.546.

#pragma once

#include <map>
#include <string>
#include <vector>

#include "seaeval/core.hpp"

namespace seaeval {

struct UsvComponentFixture {
  std::vector<std::string> frames{"f0"};
  std::vector<GroundTruthRecord> gts;
  std::vector<DetectionRecord> preds;
  WaterEdgeMap edges;
  std::map<std::string, SegmentationRaster> zones;
  int width = 1300;
  int height = 2100;
  int zone_split = 650;  // columns left of this are in-zone
};

inline UsvComponentFixture build_component_fixture() {
  UsvComponentFixture f;
  WaterEdge edge;
  edge.polylines.push_back({{0.0, 20.0}, {f.width - 1.0, 20.0}});
  f.edges["f0"] = edge;
  SegmentationRaster zone(f.width, f.height, 0);
  for (int y = 0; y < f.height; ++y)
    for (int x = 0; x < f.zone_split; ++x) zone.set(x, y, 1);
  f.zones["f0"] = zone;

  std::int64_t ann = 1;
  // kind: 'a' correct TP, 'b' wrong-class match, 'c' missed gt, 'd' clean FP
  auto place = [&](char kind, int count, bool in_zone, int& cursor) {
    const int x_base = in_zone ? 0 : 660;
    const int cols = 32;
    for (int k = 0; k < count; ++k, ++cursor) {
      const double x = x_base + 20.0 * (cursor % cols);
      const double y = 40.0 + 20.0 * (cursor / cols);
      const BBox box{x, y, 10, 10};
      if (kind != 'd') f.gts.push_back({"f0", box, 0, ann++});
      if (kind == 'a') f.preds.push_back({"f0", box, 0, 0.9});
      if (kind == 'b') f.preds.push_back({"f0", box, 1, 0.9});
      if (kind == 'd') f.preds.push_back({"f0", box, 2, 0.9});
    }
  };
  int in_cursor = 0, out_cursor = 0;
  place('a', 622, true, in_cursor);
  place('b', 351, true, in_cursor);
  place('c', 30, true, in_cursor);
  place('d', 24, true, in_cursor);
  place('a', 67, false, out_cursor);
  place('c', 1533, false, out_cursor);
  place('d', 1533, false, out_cursor);
  return f;
}

}  // namespace seaeval
