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

#include <doctest.h>

#include "oracles.hpp"
#include "seaeval/errors.hpp"
#include "seaeval/fixtures.hpp"
#include "seaeval/usv_seg.hpp"

using namespace seaeval;

namespace {

// Sky above `edge_row`, water below.
SegmentationRaster sky_water(int w, int h, int edge_row) {
  SegmentationRaster r(w, h, SegmentationRaster::kWater);
  for (int y = 0; y < edge_row; ++y)
    for (int x = 0; x < w; ++x) r.set(x, y, SegmentationRaster::kSky);
  return r;
}

WaterEdge straight_edge(int w, double row) {
  WaterEdge e;
  e.polylines.push_back({{0.0, row}, {static_cast<double>(w - 1), row}});
  return e;
}

void paint(SegmentationRaster& r, int x0, int y0, int w, int h, std::uint8_t v) {
  for (int y = y0; y < y0 + h; ++y)
    for (int x = x0; x < x0 + w; ++x) r.set(x, y, v);
}

}  // namespace

TEST_CASE("exact edge scores mu_a 0 and mu_r 100") {
  const SegmentationRaster pred = sky_water(64, 48, 20);
  const EdgeFrameResult r = water_edge_metrics(pred, straight_edge(64, 20));
  CHECK(r.mu_a() == doctest::Approx(0.0));
  CHECK(r.mu_r() == doctest::Approx(100.0));
  CHECK(r.total == 64);
}

TEST_CASE("constant vertical offsets against the per-column oracle") {
  const double offsets[] = {5.0, 25.0};
  for (const double off : offsets) {
    const int edge_gt = 20;
    const SegmentationRaster pred = sky_water(64, 64, edge_gt + static_cast<int>(off));
    const EdgeFrameResult r = water_edge_metrics(pred, straight_edge(64, edge_gt));
    CHECK(r.mu_a() == doctest::Approx(off));
    CHECK(r.mu_r() == doctest::Approx(off < 20.0 ? 100.0 : 0.0));

    std::vector<std::pair<int, int>> gt_pixels;
    for (int c = 0; c < 64; ++c) gt_pixels.push_back({c, edge_gt});
    const auto want = oracles::column_edge_oracle(pred, gt_pixels, 20.0);
    CHECK(r.mu_a() == doctest::Approx(want.mu_a).epsilon(1e-12));
    CHECK(r.mu_r() == doctest::Approx(want.mu_r).epsilon(1e-12));
  }
}

TEST_CASE("edge metrics match the oracle on random masks and slanted edges") {
  Rng64 rng(55);
  for (int inst = 0; inst < 40; ++inst) {
    const int W = 48, H = 48;
    SegmentationRaster pred(W, H, SegmentationRaster::kWater);
    for (int x = 0; x < W; ++x) {
      int y = 0;
      while (y < H) {
        const int run = rng.uniform_int(3, 16);
        const std::uint8_t cls = rng.uniform01() < 0.5
                                     ? SegmentationRaster::kWater
                                     : (rng.uniform01() < 0.5
                                            ? SegmentationRaster::kSky
                                            : SegmentationRaster::kObstacle);
        for (int k = 0; k < run && y < H; ++k, ++y) pred.set(x, y, cls);
      }
    }
    const double y0 = rng.uniform(5, H - 6), y1 = rng.uniform(5, H - 6);
    WaterEdge edge;
    edge.polylines.push_back({{0.0, y0}, {W - 1.0, y1}});
    const EdgeFrameResult r = water_edge_metrics(pred, edge);

    std::vector<std::pair<int, int>> gt_pixels;
    for (int c = 0; c < W; ++c) {
      const double t = static_cast<double>(c) / (W - 1);
      gt_pixels.push_back({c, raster_round(y0 + t * (y1 - y0))});
    }
    const auto want = oracles::column_edge_oracle(pred, gt_pixels, 20.0);
    CHECK(r.detected == want.detected);
    CHECK(r.total == want.total);
    CHECK(r.mu_a() == doctest::Approx(want.mu_a).epsilon(1e-9));
    CHECK(r.mu_r() == doctest::Approx(want.mu_r).epsilon(1e-9));
  }
}

TEST_CASE("mu_r shrinks with theta_w, mu_a does not change") {
  const SegmentationRaster pred = sky_water(32, 64, 30);
  const WaterEdge edge = straight_edge(32, 20);  // constant 10 px offset
  EdgeMetricConfig tight{5.0}, loose{20.0};
  const EdgeFrameResult t = water_edge_metrics(pred, edge, tight);
  const EdgeFrameResult l = water_edge_metrics(pred, edge, loose);
  CHECK(t.mu_a() == doctest::Approx(l.mu_a()));
  CHECK(t.mu_r() <= l.mu_r());
  CHECK(t.mu_r() == doctest::Approx(0.0));
  CHECK(l.mu_r() == doctest::Approx(100.0));
}

TEST_CASE("empty edges throw") {
  const SegmentationRaster pred = sky_water(16, 16, 4);
  CHECK_THROWS_AS(water_edge_metrics(pred, WaterEdge{}), EmptyEdge);
}

// --------------------------------------------------------------------------
// Coverage-based obstacle detection

TEST_CASE("perfect mask yields TP = gt count, no FP or FN") {
  const ScenarioData data = generate_scenario({12, 1, {2, 2}});
  const std::string frame = data.frames[0];
  const SegmentationRaster pred = data.perfect_mask(frame);
  std::vector<BBox> boxes;
  for (const auto& g : data.gts)
    if (g.frame_id == frame) boxes.push_back(g.bbox);
  const SegFrameResult r = obstacle_detection_from_mask(
      pred, boxes, data.edges.at(frame), data.zone_masks.at(frame));
  CHECK(r.tp == static_cast<std::int64_t>(boxes.size()));
  CHECK(r.fp == 0);
  CHECK(r.fn == 0);
}

TEST_CASE("a spurious blob on open water is one FP") {
  const int W = 64, H = 64, edge = 20;
  SegmentationRaster pred = sky_water(W, H, edge);
  paint(pred, 30, 40, 10, 10, SegmentationRaster::kObstacle);
  const SegFrameResult r = obstacle_detection_from_mask(
      pred, {}, straight_edge(W, edge), SegmentationRaster{});
  CHECK(r.fp == 1);
  CHECK(r.tp == 0);
  CHECK(r.fn == 0);
}

TEST_CASE("blob above the water edge is suppressed") {
  const int W = 64, H = 64, edge = 30;
  SegmentationRaster pred = sky_water(W, H, edge);
  paint(pred, 10, 5, 12, 12, SegmentationRaster::kObstacle);  // land clutter
  const SegFrameResult r = obstacle_detection_from_mask(
      pred, {}, straight_edge(W, edge), SegmentationRaster{});
  CHECK(r.fp == 0);
}

TEST_CASE("two blobs bridged by one pixel merge under 8-connectivity") {
  const int W = 64, H = 64, edge = 8;
  SegmentationRaster pred = sky_water(W, H, edge);
  paint(pred, 10, 20, 6, 6, SegmentationRaster::kObstacle);
  paint(pred, 17, 27, 6, 6, SegmentationRaster::kObstacle);
  pred.set(16, 26, SegmentationRaster::kObstacle);  // diagonal bridge
  SegDetectionConfig cfg8;
  const SegFrameResult r8 = obstacle_detection_from_mask(
      pred, {}, straight_edge(W, edge), SegmentationRaster{}, cfg8);
  CHECK(r8.fp == 1);
  SegDetectionConfig cfg4;
  cfg4.fp_connectivity = 4;
  const SegFrameResult r4 = obstacle_detection_from_mask(
      pred, {}, straight_edge(W, edge), SegmentationRaster{}, cfg4);
  // Bridge pixel touches both blobs only diagonally.
  CHECK(r4.fp >= r8.fp);
}

TEST_CASE("FP component counts match the union-find oracle on random masks") {
  Rng64 rng(66);
  for (int inst = 0; inst < 100; ++inst) {
    const int W = 64, H = 64;
    SegmentationRaster pred(W, H, SegmentationRaster::kWater);
    for (int y = 0; y < H; ++y)
      for (int x = 0; x < W; ++x)
        if (rng.uniform01() < 0.35) pred.set(x, y, SegmentationRaster::kObstacle);
    // No edge suppression (edge at row 0) and no gt boxes: every obstacle
    // pixel is a candidate.
    WaterEdge edge;
    edge.polylines.push_back({{0.0, 0.0}, {W - 1.0, 0.0}});
    const int min_area = 1 + (inst % 5);
    SegDetectionConfig cfg;
    cfg.fp_min_area = min_area;
    cfg.fp_connectivity = (inst % 2) ? 8 : 4;
    const SegFrameResult r = obstacle_detection_from_mask(
        pred, {}, edge, SegmentationRaster{}, cfg);

    std::vector<char> mask(static_cast<std::size_t>(W) * H, 0);
    for (int y = 0; y < H; ++y)
      for (int x = 0; x < W; ++x)
        mask[static_cast<std::size_t>(y) * W + x] =
            pred.at(x, y) == SegmentationRaster::kObstacle ? 1 : 0;
    const int want = oracles::union_find_components(mask, W, H,
                                                    cfg.fp_connectivity, min_area);
    CHECK(r.fp == want);
  }
}

TEST_CASE("8-connectivity never yields more FP components than 4") {
  Rng64 rng(67);
  for (int inst = 0; inst < 20; ++inst) {
    const int W = 48, H = 48;
    SegmentationRaster pred(W, H, SegmentationRaster::kWater);
    for (int y = 0; y < H; ++y)
      for (int x = 0; x < W; ++x)
        if (rng.uniform01() < 0.3) pred.set(x, y, SegmentationRaster::kObstacle);
    WaterEdge edge;
    edge.polylines.push_back({{0.0, 0.0}, {W - 1.0, 0.0}});
    SegDetectionConfig c8, c4;
    c8.fp_min_area = 1;
    c4.fp_min_area = 1;
    c4.fp_connectivity = 4;
    const auto r8 = obstacle_detection_from_mask(pred, {}, edge,
                                                 SegmentationRaster{}, c8);
    const auto r4 = obstacle_detection_from_mask(pred, {}, edge,
                                                 SegmentationRaster{}, c4);
    CHECK(r8.fp <= r4.fp);
  }
}

TEST_CASE("coverage threshold drives TP vs FN and growing tau never adds TPs") {
  const int W = 64, H = 64, edge = 8;
  SegmentationRaster pred = sky_water(W, H, edge);
  // Half-covered box.
  paint(pred, 20, 20, 10, 5, SegmentationRaster::kObstacle);
  const BBox box{20, 20, 10, 10};
  for (double tau : {0.3, 0.5, 0.51, 0.9}) {
    SegDetectionConfig cfg;
    cfg.coverage_threshold = tau;
    const SegFrameResult r = obstacle_detection_from_mask(
        pred, {box}, straight_edge(W, edge), SegmentationRaster{}, cfg);
    CHECK(r.tp + r.fn == 1);
    CHECK(r.tp == (tau <= 0.5 ? 1 : 0));
  }
}

TEST_CASE("danger-zone variants restrict by the 50% membership rule") {
  const int W = 64, H = 64, edge = 8;
  SegmentationRaster zone(W, H, 0);
  paint(zone, 0, 32, W, 32, 1);  // lower half in-zone
  SegmentationRaster pred = sky_water(W, H, edge);
  paint(pred, 10, 40, 8, 8, SegmentationRaster::kObstacle);  // in-zone TP
  paint(pred, 40, 12, 8, 8, SegmentationRaster::kObstacle);  // out-of-zone TP
  const std::vector<BBox> boxes = {{10, 40, 8, 8}, {40, 12, 8, 8}};
  const SegFrameResult r = obstacle_detection_from_mask(
      pred, boxes, straight_edge(W, edge), zone);
  CHECK(r.tp == 2);
  CHECK(r.tp_danger == 1);
  CHECK(r.fn_danger == 0);
}

TEST_CASE("zone masks with mismatched dimensions are rejected") {
  const SegmentationRaster pred = sky_water(32, 32, 8);
  const SegmentationRaster zone(16, 16, 1);
  CHECK_THROWS_AS(obstacle_detection_from_mask(pred, {}, straight_edge(32, 8),
                                               zone),
                  DimensionMismatch);
}

TEST_CASE("tp + fn always equals the gt obstacle count") {
  Rng64 rng(68);
  for (int inst = 0; inst < 20; ++inst) {
    const ScenarioData data = generate_scenario({rng.next() % 91 + 1, 1, {3, 2}});
    const std::string frame = data.frames[0];
    SegmentationRaster pred = data.perfect_mask(frame);
    // Randomly erase some obstacle pixels.
    for (auto& v : pred.data)
      if (v == SegmentationRaster::kObstacle && rng.uniform01() < 0.4)
        v = SegmentationRaster::kWater;
    std::vector<BBox> boxes;
    for (const auto& g : data.gts)
      if (g.frame_id == frame) boxes.push_back(g.bbox);
    const SegFrameResult r = obstacle_detection_from_mask(
        pred, boxes, data.edges.at(frame), data.zone_masks.at(frame));
    CHECK(r.tp + r.fn == static_cast<std::int64_t>(boxes.size()));
  }
}

// --------------------------------------------------------------------------
// Report pooling and the size-binned breakdown

TEST_CASE("avg score composes the two F1 values") {
  CHECK(average_score(94.3, 92.7) == doctest::Approx(93.5));
  CHECK(average_score(100.0, 100.0) == doctest::Approx(100.0));
  CHECK(average_score(93.5, 92.9) == doctest::Approx(93.2));
}

TEST_CASE("seg_report pools counts micro-style") {
  SegFrameResult f1;
  f1.tp = 3;
  f1.fp = 1;
  f1.fn = 1;
  SegFrameResult f2;
  f2.tp = 2;
  f2.fp = 0;
  f2.fn = 2;
  EdgeFrameResult e1;
  e1.sum_sq_dist = 100.0;
  e1.detected = 4;
  e1.within_theta = 3;
  e1.total = 5;
  const SegReport r = seg_report({e1}, {f1, f2});
  CHECK(r.tp == 5);
  CHECK(r.precision == doctest::Approx(100.0 * 5.0 / 6.0));
  CHECK(r.recall == doctest::Approx(100.0 * 5.0 / 8.0));
  CHECK(r.f1 == doctest::Approx(2 * r.precision * r.recall /
                                (r.precision + r.recall)));
  CHECK(r.mu_a == doctest::Approx(5.0));
  CHECK(r.mu_r == doctest::Approx(60.0));
  CHECK(r.avg_score == doctest::Approx((r.f1 + r.f1_danger) / 2));

  const SegReport macro = seg_report({e1}, {f1, f2}, /*macro=*/true);
  CHECK(macro.precision == doctest::Approx((75.0 + 100.0) / 2));
}

TEST_CASE("size bins are equally populated and detect small-object misses") {
  std::vector<ObstacleRecord> records;
  // 24 gt obstacles: areas 1..24, misses concentrated on the smallest.
  for (int i = 1; i <= 24; ++i) {
    records.push_back({i, i > 6, false, false});
  }
  const auto f1 = size_binned_f1(records, 12);
  REQUIRE(f1.size() == 12);
  CHECK(f1[0] == doctest::Approx(0.0));   // areas 1,2 both missed
  CHECK(f1[11] == doctest::Approx(100.0));
  CHECK(f1[0] < f1[11]);

  // All detected, no FPs: every bin is 100.
  for (auto& r : records) r.detected = true;
  for (const double v : size_binned_f1(records, 12))
    CHECK(v == doctest::Approx(100.0));
}

TEST_CASE("fp components land in bins by area") {
  std::vector<ObstacleRecord> records;
  for (int i = 1; i <= 12; ++i) records.push_back({10 * i, true, false, false});
  records.push_back({5, false, false, true});    // small fp -> bin 0
  records.push_back({115, false, false, true});  // large fp -> bin 11
  const auto f1 = size_binned_f1(records, 12);
  CHECK(f1[0] < 100.0);
  CHECK(f1[11] < 100.0);
  for (int b = 1; b < 11; ++b) CHECK(f1[b] == doctest::Approx(100.0));
}

TEST_CASE("too few obstacles throw") {
  std::vector<ObstacleRecord> records(5, ObstacleRecord{10, true, false, false});
  CHECK_THROWS_AS(size_binned_f1(records, 12), TooFewObstacles);
}
