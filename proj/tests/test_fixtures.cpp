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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "seaeval/fixtures.hpp"
#include "seaeval/io_formats.hpp"
#include "seaeval/od_metrics.hpp"

using namespace seaeval;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("splitmix stream is reproducible and uniform-ish") {
  Rng64 a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  Rng64 c(42);
  double sum = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double u = c.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
  }
  CHECK(sum / 10000 == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("same seed produces byte-identical scenario directories") {
  namespace fs = std::filesystem;
  const fs::path dir1 = fs::temp_directory_path() / "seaeval_fix_a";
  const fs::path dir2 = fs::temp_directory_path() / "seaeval_fix_b";
  fs::remove_all(dir1);
  fs::remove_all(dir2);

  ScenarioSpec spec;
  spec.seed = 1;
  spec.frames = 4;
  const ScenarioData d1 = generate_scenario(spec);
  const ScenarioData d2 = generate_scenario(spec);
  PerturbationSpec ps;
  ps.shift_sigma = 2.0;
  ps.seed = 5;
  const auto p1 = perturb(d1.gts, ps, ClassTable::usv());
  const auto p2 = perturb(d2.gts, ps, ClassTable::usv());
  write_scenario_dir(d1, dir1.string(), &p1);
  write_scenario_dir(d2, dir2.string(), &p2);

  for (const auto& entry : fs::recursive_directory_iterator(dir1)) {
    if (!entry.is_regular_file()) continue;
    const fs::path rel = fs::relative(entry.path(), dir1);
    CHECK(slurp(entry.path()) == slurp(dir2 / rel));
  }
  fs::remove_all(dir1);
  fs::remove_all(dir2);
}

TEST_CASE("static scenarios have zero inter-frame motion") {
  ScenarioSpec spec;
  spec.motion = MotionKind::kStatic;
  spec.frames = 5;
  const ScenarioData data = generate_scenario(spec);
  std::map<std::int64_t, BBox> first;
  for (const auto& e : data.gt_tracks.entries) {
    auto it = first.find(e.track_id);
    if (it == first.end()) {
      first[e.track_id] = e.bbox;
    } else {
      CHECK(e.bbox.x == it->second.x);
      CHECK(e.bbox.y == it->second.y);
    }
  }
}

TEST_CASE("pan scenarios translate every box by the same offset") {
  ScenarioSpec spec;
  spec.motion = MotionKind::kPan;
  spec.frames = 6;
  const ScenarioData data = generate_scenario(spec);
  std::map<std::string, std::map<std::int64_t, BBox>> by_frame;
  for (const auto& e : data.gt_tracks.entries)
    by_frame[e.frame_id][e.track_id] = e.bbox;
  for (std::size_t f = 1; f < data.frames.size(); ++f) {
    const auto& prev = by_frame.at(data.frames[f - 1]);
    const auto& cur = by_frame.at(data.frames[f]);
    for (const auto& [id, box] : cur) {
      const BBox& p = prev.at(id);
      CHECK(box.x - p.x == doctest::Approx(2.0));
      CHECK(box.y - p.y == doctest::Approx(0.0));
      CHECK(box.w == p.w);
    }
  }
}

TEST_CASE("tilt scenarios translate boxes vertically") {
  ScenarioSpec spec;
  spec.motion = MotionKind::kTilt;
  spec.frames = 5;
  const ScenarioData data = generate_scenario(spec);
  std::map<std::string, std::map<std::int64_t, BBox>> by_frame;
  for (const auto& e : data.gt_tracks.entries)
    by_frame[e.frame_id][e.track_id] = e.bbox;
  for (std::size_t f = 1; f < data.frames.size(); ++f) {
    const auto& prev = by_frame.at(data.frames[f - 1]);
    for (const auto& [id, box] : by_frame.at(data.frames[f])) {
      CHECK(box.x == prev.at(id).x);
      CHECK(box.y - prev.at(id).y == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("teleport scenarios move boxes but keep identities and sizes") {
  ScenarioSpec spec;
  spec.motion = MotionKind::kTeleport;
  spec.frames = 4;
  const ScenarioData data = generate_scenario(spec);
  std::map<std::int64_t, std::set<std::pair<double, double>>> positions;
  std::map<std::int64_t, double> width;
  for (const auto& e : data.gt_tracks.entries) {
    positions[e.track_id].insert({e.bbox.x, e.bbox.y});
    if (!width.count(e.track_id)) width[e.track_id] = e.bbox.w;
    CHECK(e.bbox.w == width[e.track_id]);
  }
  bool any_moved = false;
  for (const auto& [id, pos] : positions) any_moved |= pos.size() > 1;
  CHECK(any_moved);
}

TEST_CASE("zero perturbation returns ground truth with score 1") {
  const ScenarioData data = generate_scenario({});
  const auto preds = perturb(data.gts, {}, ClassTable::usv());
  REQUIRE(preds.size() == data.gts.size());
  for (std::size_t i = 0; i < preds.size(); ++i) {
    CHECK(preds[i].frame_id == data.gts[i].frame_id);
    CHECK(preds[i].bbox.x == data.gts[i].bbox.x);
    CHECK(preds[i].score == 1.0);
    CHECK(preds[i].class_id == data.gts[i].class_id);
  }
}

TEST_CASE("drop_rate 1 empties the predictions") {
  const ScenarioData data = generate_scenario({});
  PerturbationSpec ps;
  ps.drop_rate = 1.0;
  CHECK(perturb(data.gts, ps, ClassTable::usv()).empty());
  CHECK(perturb_tracks(data.gt_tracks, ps).entries.empty());
}

TEST_CASE("corner-shift statistics match their closed forms") {
  // Corners shift independently with sigma: the center displacement is
  // Rayleigh with scale sigma/sqrt(2), mean sigma*sqrt(pi/2)/sqrt(2); the
  // (dw, dh) size change is Rayleigh with scale sigma*sqrt(2), mean
  // sigma*sqrt(pi/2)*sqrt(2).
  const double sigma = 5.0;
  std::vector<GroundTruthRecord> gts;
  for (int i = 0; i < 1000; ++i) {
    GroundTruthRecord g;
    g.frame_id = "f0";
    g.bbox = {1000.0 + 80.0 * (i % 100), 1000.0 + 80.0 * (i / 100), 40, 40};
    g.id = i;
    gts.push_back(g);
  }
  PerturbationSpec ps;
  ps.shift_sigma = sigma;
  ps.seed = 99;
  const auto preds = perturb(gts, ps, ClassTable::uav_mot());
  REQUIRE(preds.size() == gts.size());
  double center_sum = 0.0, size_sum = 0.0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const double dcx = preds[i].bbox.cx() - gts[i].bbox.cx();
    const double dcy = preds[i].bbox.cy() - gts[i].bbox.cy();
    center_sum += std::hypot(dcx, dcy);
    const double dw = preds[i].bbox.w - gts[i].bbox.w;
    const double dh = preds[i].bbox.h - gts[i].bbox.h;
    size_sum += std::hypot(dw, dh);
  }
  const double pi = 3.14159265358979323846;
  const double want_center = sigma * std::sqrt(pi / 2.0) / std::sqrt(2.0);
  const double want_size = sigma * std::sqrt(pi / 2.0) * std::sqrt(2.0);
  CHECK(center_sum / preds.size() ==
        doctest::Approx(want_center).epsilon(0.10));
  CHECK(size_sum / preds.size() == doctest::Approx(want_size).epsilon(0.10));
}

TEST_CASE("zero perturbation is the end-to-end identity for the od evaluator") {
  const ScenarioData data = generate_scenario({77, 6, {2, 2, 1}});
  const auto preds = perturb(data.gts, {}, ClassTable::usv());
  const OdReport r =
      evaluate_od(preds, data.gts, data.frames, ClassTable::usv());
  CHECK(r.ap == doctest::Approx(1.0));
}

TEST_CASE("recall decreases in expectation as drop_rate grows") {
  double recall_low = 0.0, recall_high = 0.0;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const ScenarioData data = generate_scenario({seed, 3, {3, 3}});
    PerturbationSpec low, high;
    low.drop_rate = 0.1;
    low.seed = seed * 13;
    high.drop_rate = 0.6;
    high.seed = seed * 13;
    const auto pl = perturb(data.gts, low, ClassTable::usv());
    const auto ph = perturb(data.gts, high, ClassTable::usv());
    recall_low += static_cast<double>(pl.size()) / data.gts.size();
    recall_high += static_cast<double>(ph.size()) / data.gts.size();
  }
  CHECK(recall_low / 30 > recall_high / 30);
}

TEST_CASE("class flips stay inside the table") {
  const ScenarioData data = generate_scenario({5, 4, {3, 3, 3}});
  PerturbationSpec ps;
  ps.class_flip_rate = 1.0;
  const auto preds = perturb(data.gts, ps, ClassTable::usv());
  for (std::size_t i = 0; i < preds.size(); ++i) {
    CHECK(preds[i].class_id >= 0);
    CHECK(preds[i].class_id < 3);
    CHECK(preds[i].class_id != data.gts[i].class_id);
  }
}
