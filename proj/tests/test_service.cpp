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
#include <httplib.h>

#include <atomic>
#include <filesystem>
#include <fstream>

#include "seaeval/fixtures.hpp"
#include "seaeval/io_formats.hpp"
#include "seaeval/service.hpp"

using namespace seaeval;
namespace fs = std::filesystem;

namespace {

struct TestEnv {
  fs::path dir;
  std::shared_ptr<std::atomic<std::int64_t>> clock;

  explicit TestEnv(const std::string& name)
      : clock(std::make_shared<std::atomic<std::int64_t>>(1700000000)) {
    dir = fs::temp_directory_path() / ("seaeval_svc_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir / "tracks" / "od");
    std::ofstream(dir / "users.json")
        << R"({"tokens": {"tok-alice": "alice", "tok-bob": "bob"}})";

    // Two-class, two-frame od ground truth (one box per class).
    CocoGtFile gt;
    gt.classes = ClassTable({"a", "b"});
    gt.category_ids = {1, 2};
    gt.images = {{"f1", json::object()}, {"f2", json::object()}};
    gt.records = {
        {"f1", {0, 0, 10, 10}, 0, 1},
        {"f2", {0, 0, 10, 10}, 1, 2},
    };
    gt.record_extras = {json::object(), json::object()};
    std::ofstream(dir / "tracks" / "od" / "gt.json") << write_coco_gt_json(gt);
  }

  ~TestEnv() { fs::remove_all(dir); }

  ServiceConfig config() const {
    ServiceConfig cfg;
    cfg.data_dir = dir.string();
    cfg.port = 0;
    cfg.workers = 2;
    auto c = clock;
    cfg.now_fn = [c] { return c->load(); };
    return cfg;
  }
};

// Detection payload with one box of the given IoU (height/10) per class.
// Class heights <= 0 mean "no detection for that class".
std::string det_payload(double h_class_a, double h_class_b) {
  json arr = json::array();
  if (h_class_a > 0) {
    arr.push_back({{"image_id", "f1"},
                   {"category_id", 1},
                   {"bbox", {0.0, 0.0, 10.0, h_class_a}},
                   {"score", 0.9}});
  }
  if (h_class_b > 0) {
    arr.push_back({{"image_id", "f2"},
                   {"category_id", 2},
                   {"bbox", {0.0, 0.0, 10.0, h_class_b}},
                   {"score", 0.9}});
  }
  return arr.dump();
}

httplib::Result post_submission(httplib::Client& cli, const std::string& token,
                                const std::string& payload,
                                const std::string& model = "m",
                                const std::string& track = "od") {
  httplib::MultipartFormDataItems items = {
      {"model", model, "", ""},
      {"fps", "10", "", ""},
      {"hardware", "RTX 3090", "", ""},
      {"datasets", "synthetic", "", ""},
      {"payload", payload, "preds.json", "application/json"},
  };
  httplib::Headers headers = {{"Authorization", "Bearer " + token}};
  return cli.Post("/api/v1/tracks/" + track + "/submissions", headers, items);
}

}  // namespace

TEST_CASE("submission protocol: quota, metadata, auth, parse failures") {
  TestEnv env("quota");
  EvalService service(env.config());
  service.start();
  httplib::Client cli("127.0.0.1", service.port());

  auto res = cli.Get("/healthz");
  REQUIRE(res);
  CHECK(res->status == 200);

  // No token.
  {
    httplib::MultipartFormDataItems items = {
        {"model", "m", "", ""},
        {"fps", "10", "", ""},
        {"hardware", "hw", "", ""},
        {"datasets", "d", "", ""},
        {"payload", det_payload(10, 10), "p.json", "application/json"},
    };
    auto r = cli.Post("/api/v1/tracks/od/submissions", {}, items);
    REQUIRE(r);
    CHECK(r->status == 401);
  }
  // Unknown track.
  {
    auto r = post_submission(cli, "tok-alice", det_payload(10, 10), "m", "nope");
    REQUIRE(r);
    CHECK(r->status == 404);
  }
  // Missing hardware.
  {
    httplib::MultipartFormDataItems items = {
        {"model", "m", "", ""},
        {"fps", "10", "", ""},
        {"datasets", "d", "", ""},
        {"payload", det_payload(10, 10), "p.json", "application/json"},
    };
    httplib::Headers headers = {{"Authorization", "Bearer tok-alice"}};
    auto r = cli.Post("/api/v1/tracks/od/submissions", headers, items);
    REQUIRE(r);
    CHECK(r->status == 400);
  }
  // Malformed payload.
  {
    auto r = post_submission(cli, "tok-alice", "{not json");
    REQUIRE(r);
    CHECK(r->status == 422);
  }

  // Three accepted uploads, the fourth rejected within the same UTC day.
  for (int k = 0; k < 3; ++k) {
    auto r = post_submission(cli, "tok-alice", det_payload(10, 10));
    REQUIRE(r);
    CHECK(r->status == 202);
  }
  {
    auto r = post_submission(cli, "tok-alice", det_payload(10, 10));
    REQUIRE(r);
    CHECK(r->status == 429);
  }
  // Deleting a submission does not refund the day's uploads.
  {
    REQUIRE(service.wait_idle());
    std::string victim;
    for (const auto& s : service.submissions()) {
      if (s.user == "alice") victim = s.id;
    }
    REQUIRE(!victim.empty());
    httplib::Headers alice = {{"Authorization", "Bearer tok-alice"}};
    CHECK(cli.Delete("/api/v1/submissions/" + victim, alice)->status == 204);
    auto r = post_submission(cli, "tok-alice", det_payload(10, 10));
    REQUIRE(r);
    CHECK(r->status == 429);
  }
  // Another user is unaffected; the next UTC day resets the quota.
  {
    auto r = post_submission(cli, "tok-bob", det_payload(10, 10));
    REQUIRE(r);
    CHECK(r->status == 202);
  }
  env.clock->store(1700000000 + 86400);
  {
    auto r = post_submission(cli, "tok-alice", det_payload(10, 10));
    REQUIRE(r);
    CHECK(r->status == 202);
  }
  CHECK(service.wait_idle());
  service.stop();
}

TEST_CASE("leaderboard ranks by AP with the AP50 tiebreak") {
  TestEnv env("board");
  EvalService service(env.config());
  service.start();
  httplib::Client cli("127.0.0.1", service.port());

  // low-ap: class a at IoU 0.72, class b missed -> ap 0.25, ap50 0.5.
  // tie-win: class a at 0.52, class b at 0.67 -> ap 0.25, ap50 1.0.
  // top: perfect -> ap 1.0.
  auto r1 = post_submission(cli, "tok-alice", det_payload(7.2, 0), "low-ap");
  auto r2 = post_submission(cli, "tok-alice", det_payload(5.2, 6.7), "tie-win");
  auto r3 = post_submission(cli, "tok-bob", det_payload(10, 10), "top");
  REQUIRE(r1);
  REQUIRE(r2);
  REQUIRE(r3);
  CHECK(r1->status == 202);
  CHECK(r2->status == 202);
  CHECK(r3->status == 202);
  REQUIRE(service.wait_idle());

  auto board = cli.Get("/api/v1/tracks/od/leaderboard");
  REQUIRE(board);
  CHECK(board->status == 200);
  const json body = json::parse(board->body);
  REQUIRE(body.at("entries").size() == 3);
  CHECK(body.at("entries")[0].at("model") == "top");
  CHECK(body.at("entries")[1].at("model") == "tie-win");
  CHECK(body.at("entries")[2].at("model") == "low-ap");
  CHECK(body.at("entries")[1].at("primary") ==
        body.at("entries")[2].at("primary"));
  CHECK(body.at("entries")[1].at("tiebreak").get<double>() >
        body.at("entries")[2].at("tiebreak").get<double>());

  CHECK(cli.Get("/api/v1/tracks/bogus/leaderboard")->status == 404);
  service.stop();
}

TEST_CASE("visibility toggles and owner-only deletion") {
  TestEnv env("vis");
  EvalService service(env.config());
  service.start();
  httplib::Client cli("127.0.0.1", service.port());

  auto r = post_submission(cli, "tok-alice", det_payload(10, 10), "mine");
  REQUIRE(r);
  const std::string id = json::parse(r->body).at("id");
  REQUIRE(service.wait_idle());

  auto board = [&] {
    return json::parse(cli.Get("/api/v1/tracks/od/leaderboard")->body)
        .at("entries")
        .size();
  };
  CHECK(board() == 1);

  httplib::Headers alice = {{"Authorization", "Bearer tok-alice"}};
  httplib::Headers bob = {{"Authorization", "Bearer tok-bob"}};

  // Hide, then show again: the row disappears and reappears.
  auto hide = cli.Patch("/api/v1/submissions/" + id, alice,
                        R"({"visible": false})", "application/json");
  REQUIRE(hide);
  CHECK(hide->status == 200);
  CHECK(board() == 0);
  auto show = cli.Patch("/api/v1/submissions/" + id, alice,
                        R"({"visible": true})", "application/json");
  CHECK(show->status == 200);
  CHECK(board() == 1);

  // Non-owner operations are forbidden.
  CHECK(cli.Patch("/api/v1/submissions/" + id, bob, R"({"visible": false})",
                  "application/json")
            ->status == 403);
  CHECK(cli.Delete("/api/v1/submissions/" + id, bob)->status == 403);
  CHECK(cli.Get("/api/v1/submissions/" + id).value().status == 401);

  auto got = cli.Get("/api/v1/submissions/" + id, alice);
  REQUIRE(got);
  CHECK(got->status == 200);
  CHECK(json::parse(got->body).at("status") == "evaluated");

  auto gone = cli.Delete("/api/v1/submissions/" + id, alice);
  REQUIRE(gone);
  CHECK(gone->status == 204);
  CHECK(board() == 0);
  CHECK(cli.Delete("/api/v1/submissions/" + id, alice)->status == 404);
  service.stop();
}

TEST_CASE("restart preserves submissions, quota, and leaderboard") {
  TestEnv env("restart");
  std::string id;
  std::string report_before;
  {
    EvalService service(env.config());
    service.start();
    httplib::Client cli("127.0.0.1", service.port());
    for (int k = 0; k < 3; ++k) {
      auto r = post_submission(cli, "tok-alice", det_payload(10, 10),
                               "m" + std::to_string(k));
      REQUIRE(r);
      CHECK(r->status == 202);
      if (k == 0) id = json::parse(r->body).at("id");
    }
    REQUIRE(service.wait_idle());
    for (const auto& s : service.submissions()) {
      if (s.id == id) report_before = s.report_json;
    }
    service.stop();
  }
  REQUIRE(!report_before.empty());
  {
    EvalService service(env.config());
    service.start();
    httplib::Client cli("127.0.0.1", service.port());
    // State is intact.
    CHECK(service.submissions().size() == 3);
    for (const auto& s : service.submissions()) {
      CHECK(s.status == "evaluated");
      if (s.id == id) CHECK(s.report_json == report_before);
    }
    // Quota survives the restart: the 4th upload of the day still fails.
    auto r = post_submission(cli, "tok-alice", det_payload(10, 10));
    REQUIRE(r);
    CHECK(r->status == 429);
    const auto board = service.leaderboard("od");
    CHECK(board.size() == 3);
    service.stop();
  }
}

TEST_CASE("re-evaluating a stored bundle is bit-identical") {
  TestEnv env("reeval");
  EvalService service(env.config());
  service.start();
  httplib::Client cli("127.0.0.1", service.port());
  auto r = post_submission(cli, "tok-alice", det_payload(5.2, 6.7));
  REQUIRE(r);
  REQUIRE(service.wait_idle());
  const auto subs = service.submissions();
  REQUIRE(subs.size() == 1);
  const std::string again = service.evaluate_bundle(subs[0].bundle);
  const std::string and_again = service.evaluate_bundle(subs[0].bundle);
  CHECK(again == subs[0].report_json);
  CHECK(and_again == again);
  service.stop();
}

TEST_CASE("service evaluates tracking and segmentation payloads") {
  TestEnv env("tracks");
  // mot track: two frames, one static box.
  fs::create_directories(env.dir / "tracks" / "mot");
  const std::string mot_gt = "1,1,10,10,20,20,1,0,1\n2,1,10,10,20,20,1,0,1\n";
  std::ofstream(env.dir / "tracks" / "mot" / "gt.csv") << mot_gt;

  // usv-seg track: one frame, water everywhere below a row-4 edge, one box.
  fs::create_directories(env.dir / "tracks" / "usv-seg");
  {
    CocoGtFile gt;
    gt.classes = ClassTable::usv();
    gt.category_ids = {1, 2, 3};
    gt.images = {{"f0", json::object()}};
    gt.records = {{"f0", {4, 8, 6, 6}, 0, 1}};
    gt.record_extras = {json::object()};
    std::ofstream(env.dir / "tracks" / "usv-seg" / "gt.json")
        << write_coco_gt_json(gt);
    WaterEdgeMap edges;
    WaterEdge e;
    e.polylines.push_back({{0.0, 4.0}, {15.0, 4.0}});
    edges["f0"] = e;
    std::ofstream(env.dir / "tracks" / "usv-seg" / "edges.json")
        << write_edges_json(edges);
  }

  // usv-det track reuses the same frame and edge.
  fs::create_directories(env.dir / "tracks" / "usv-det");
  fs::copy_file(env.dir / "tracks" / "usv-seg" / "gt.json",
                env.dir / "tracks" / "usv-det" / "gt.json");
  fs::copy_file(env.dir / "tracks" / "usv-seg" / "edges.json",
                env.dir / "tracks" / "usv-det" / "edges.json");

  EvalService service(env.config());
  service.start();
  httplib::Client cli("127.0.0.1", service.port());
  httplib::Headers auth = {{"Authorization", "Bearer tok-alice"}};

  // Perfect tracking submission.
  {
    httplib::MultipartFormDataItems items = {
        {"model", "tracker", "", ""},
        {"fps", "unmeasured", "", ""},
        {"hardware", "cpu", "", ""},
        {"datasets", "synthetic", "", ""},
        {"payload", mot_gt, "pred.csv", "text/csv"},
    };
    auto r = cli.Post("/api/v1/tracks/mot/submissions", auth, items);
    REQUIRE(r);
    CHECK(r->status == 202);
  }
  // Perfect segmentation masks: sky above row 4, water below, obstacle box.
  {
    SegmentationRaster mask(16, 16, SegmentationRaster::kWater);
    for (int y = 0; y < 4; ++y)
      for (int x = 0; x < 16; ++x) mask.set(x, y, SegmentationRaster::kSky);
    for (int y = 8; y < 14; ++y)
      for (int x = 4; x < 10; ++x)
        mask.set(x, y, SegmentationRaster::kObstacle);
    httplib::MultipartFormDataItems items = {
        {"model", "segmenter", "", ""},
        {"fps", "3", "", ""},
        {"hardware", "gpu", "", ""},
        {"datasets", "synthetic", "", ""},
        {"payload", write_mask_pgm(mask), "f0.pgm", "image/x-portable-graymap"},
    };
    auto r = cli.Post("/api/v1/tracks/usv-seg/submissions", auth, items);
    REQUIRE(r);
    CHECK(r->status == 202);
  }
  // Detection submission against the usv-det track.
  {
    const json payload = json::array(
        {{{"image_id", "f0"},
          {"category_id", 1},
          {"bbox", {4.0, 8.0, 6.0, 6.0}},
          {"score", 0.9}}});
    httplib::MultipartFormDataItems items = {
        {"model", "detector", "", ""},
        {"fps", "5", "", ""},
        {"hardware", "gpu", "", ""},
        {"datasets", "synthetic", "", ""},
        {"payload", payload.dump(), "preds.json", "application/json"},
    };
    auto r = cli.Post("/api/v1/tracks/usv-det/submissions", auth, items);
    REQUIRE(r);
    CHECK(r->status == 202);
  }
  REQUIRE(service.wait_idle());

  int evaluated = 0;
  for (const auto& s : service.submissions()) {
    CHECK(s.status == "evaluated");
    ++evaluated;
    const json r = json::parse(s.report_json);
    if (s.track == "mot") CHECK(r.at("hota").get<double>() == 1.0);
    if (s.track == "usv-seg") {
      CHECK(r.at("f1").get<double>() == 100.0);
      CHECK(r.at("mu_a").get<double>() == 0.0);
    }
    if (s.track == "usv-det") CHECK(r.at("f1_2").get<double>() == 1.0);
  }
  CHECK(evaluated == 3);

  // Leaderboards serve every track.
  for (const std::string track : {"mot", "usv-seg", "usv-det"}) {
    auto board = cli.Get("/api/v1/tracks/" + track + "/leaderboard");
    REQUIRE(board);
    CHECK(board->status == 200);
    CHECK(json::parse(board->body).at("entries").size() == 1);
  }
  service.stop();
}

TEST_CASE("sha256 content addressing") {
  CHECK(sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
