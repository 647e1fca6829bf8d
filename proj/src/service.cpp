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

#include "seaeval/service.hpp"

#include <openssl/sha.h>

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "seaeval/errors.hpp"
#include "seaeval/io_formats.hpp"
#include "seaeval/usv_det.hpp"
#include "seaeval/usv_seg.hpp"
#include "seaeval/mot_metrics.hpp"
#include "seaeval/od_metrics.hpp"

namespace seaeval {

namespace fs = std::filesystem;

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[SHA256_DIGEST_LENGTH];
  SHA256(reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size(),
         digest);
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * SHA256_DIGEST_LENGTH);
  for (unsigned char b : digest) {
    out.push_back(hex[b >> 4]);
    out.push_back(hex[b & 0xf]);
  }
  return out;
}

const std::vector<std::string>& EvalService::known_tracks() {
  static const std::vector<std::string> tracks = {"od", "od-binary", "mot",
                                                  "usv-seg", "usv-det"};
  return tracks;
}

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot read " + path.string());
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path.string());
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
}

json bundle_to_json(const SubmissionBundle& b) {
  json files = json::array();
  for (const auto& f : b.files)
    files.push_back({{"name", f.name}, {"sha256", f.sha256}});
  return {{"track", b.track},       {"model", b.model},
          {"declared_fps", b.declared_fps}, {"hardware", b.hardware},
          {"datasets_used", b.datasets_used}, {"files", files}};
}

SubmissionBundle bundle_from_json(const json& j) {
  SubmissionBundle b;
  b.track = j.at("track").get<std::string>();
  b.model = j.at("model").get<std::string>();
  b.declared_fps = j.at("declared_fps").get<std::string>();
  b.hardware = j.at("hardware").get<std::string>();
  b.datasets_used = j.at("datasets_used").get<std::vector<std::string>>();
  for (const auto& f : j.at("files")) {
    b.files.push_back({f.at("name").get<std::string>(),
                       f.at("sha256").get<std::string>()});
  }
  return b;
}

bool valid_fps(const std::string& fps) {
  if (fps == "unmeasured") return true;
  try {
    return std::stod(fps) > 0.0;
  } catch (...) {
    return false;
  }
}

}  // namespace

std::vector<LeaderboardEntry> leaderboard_locked_impl(
    const std::map<std::string, Submission>& subs, const std::string& track);

struct EvalService::Impl {
  ServiceConfig cfg;
  mutable std::mutex mu;
  std::map<std::string, Submission> subs;         // id -> submission
  std::map<std::string, std::string> tokens;      // token -> user
  // Accepted uploads per (user, UTC day). Deleting a submission does not
  // refund its upload.
  std::map<std::pair<std::string, std::int64_t>, int> upload_counts;
  int next_id = 1;
  std::ofstream journal;

  std::deque<std::string> queue;
  mutable std::condition_variable queue_cv;
  mutable std::condition_variable idle_cv;
  int in_flight = 0;
  bool stopping = false;
  std::vector<std::thread> workers;

  httplib::Server server;
  std::thread server_thread;
  int bound_port = 0;

  explicit Impl(ServiceConfig c) : cfg(std::move(c)) {
    if (!cfg.now_fn) {
      cfg.now_fn = [] {
        return static_cast<std::int64_t>(
            std::chrono::duration_cast<std::chrono::seconds>(
                std::chrono::system_clock::now().time_since_epoch())
                .count());
      };
    }
    fs::create_directories(cfg.data_dir);
    fs::create_directories(fs::path(cfg.data_dir) / "bundles");
    load_tokens();
    replay_journal();
    journal.open(fs::path(cfg.data_dir) / "journal.jsonl",
                 std::ios::app | std::ios::binary);
    start_workers();
  }

  void load_tokens() {
    const fs::path users = fs::path(cfg.data_dir) / "users.json";
    if (!fs::exists(users)) return;
    const json j = json::parse(read_file(users));
    for (auto it = j.at("tokens").begin(); it != j.at("tokens").end(); ++it) {
      tokens[it.key()] = it.value().get<std::string>();
    }
  }

  void replay_journal() {
    const fs::path path = fs::path(cfg.data_dir) / "journal.jsonl";
    if (!fs::exists(path)) return;
    std::ifstream f(path, std::ios::binary);
    std::string line;
    while (std::getline(f, line)) {
      if (line.empty()) continue;
      const json e = json::parse(line, nullptr, false);
      if (e.is_discarded()) continue;  // torn tail write after a crash
      const std::string event = e.value("event", "");
      if (event == "created") {
        Submission s;
        s.id = e.at("id").get<std::string>();
        s.user = e.at("user").get<std::string>();
        s.track = e.at("track").get<std::string>();
        s.bundle = bundle_from_json(e.at("bundle"));
        s.status = "queued";
        s.visible = true;
        s.created_at = e.at("created_at").get<std::int64_t>();
        ++upload_counts[{s.user, s.created_at / 86400}];
        subs[s.id] = std::move(s);
        const int num = std::atoi(e.at("id").get<std::string>().c_str() + 1);
        next_id = std::max(next_id, num + 1);
      } else if (event == "evaluated") {
        auto it = subs.find(e.at("id").get<std::string>());
        if (it == subs.end()) continue;
        it->second.status = e.at("status").get<std::string>();
        it->second.report_json = e.value("report", "");
        it->second.failure = e.value("failure", "");
      } else if (event == "visibility") {
        auto it = subs.find(e.at("id").get<std::string>());
        if (it != subs.end()) it->second.visible = e.at("visible").get<bool>();
      } else if (event == "deleted") {
        subs.erase(e.at("id").get<std::string>());
      }
    }
    // Unfinished evaluations resume after restart.
    for (const auto& [id, s] : subs) {
      if (s.status == "queued") queue.push_back(id);
    }
  }

  void append_journal(const json& event) {
    journal << event.dump() << "\n";
    journal.flush();
  }

  void start_workers() {
    for (int i = 0; i < std::max(1, cfg.workers); ++i) {
      workers.emplace_back([this] { worker_loop(); });
    }
  }

  void worker_loop() {
    for (;;) {
      std::string id;
      {
        std::unique_lock<std::mutex> lock(mu);
        queue_cv.wait(lock, [this] { return stopping || !queue.empty(); });
        if (stopping && queue.empty()) return;
        id = queue.front();
        queue.pop_front();
        ++in_flight;
      }
      std::string report, failure, status = "evaluated";
      SubmissionBundle bundle;
      {
        std::lock_guard<std::mutex> lock(mu);
        auto it = subs.find(id);
        if (it == subs.end()) {  // deleted while queued
          --in_flight;
          idle_cv.notify_all();
          continue;
        }
        bundle = it->second.bundle;
      }
      try {
        report = evaluate(bundle);
      } catch (const std::exception& e) {
        status = "failed";
        failure = e.what();
      }
      {
        std::lock_guard<std::mutex> lock(mu);
        auto it = subs.find(id);
        if (it != subs.end()) {
          it->second.status = status;
          it->second.report_json = report;
          it->second.failure = failure;
          json ev = {{"event", "evaluated"}, {"id", id}, {"status", status}};
          if (!report.empty()) ev["report"] = report;
          if (!failure.empty()) ev["failure"] = failure;
          append_journal(ev);
        }
        --in_flight;
        idle_cv.notify_all();
      }
    }
  }

  fs::path bundle_path(const std::string& sha) const {
    return fs::path(cfg.data_dir) / "bundles" / sha;
  }

  fs::path track_dir(const std::string& track) const {
    return fs::path(cfg.data_dir) / "tracks" / track;
  }

  std::string bundle_file(const SubmissionBundle& b, std::size_t i) const {
    return read_file(bundle_path(b.files.at(i).sha256));
  }

  // Deterministic evaluation against the track's ground truth.
  std::string evaluate(const SubmissionBundle& b) const {
    const fs::path dir = track_dir(b.track);
    if (b.track == "od" || b.track == "od-binary") {
      const CocoGtFile gt = parse_coco_gt_json(read_file(dir / "gt.json"));
      const CocoDetFile det =
          parse_coco_det_json(bundle_file(b, 0), gt.category_to_class());
      OdConfig cfg;
      cfg.binary = b.track == "od-binary";
      const OdReport report =
          evaluate_od(det.records, gt.records, gt.frames(), gt.classes, cfg);
      return canonical_json(od_report_to_json(report));
    }
    if (b.track == "mot") {
      const MotCsvFile gt = parse_mot_csv(read_file(dir / "gt.csv"), "seq0");
      const MotCsvFile pred = parse_mot_csv(bundle_file(b, 0), "seq0");
      const MotReport report = evaluate_mot(pred.tracks, gt.tracks);
      return canonical_json(mot_report_to_json(report));
    }
    if (b.track == "usv-det") {
      const CocoGtFile gt = parse_coco_gt_json(read_file(dir / "gt.json"));
      const CocoDetFile det =
          parse_coco_det_json(bundle_file(b, 0), gt.category_to_class());
      const WaterEdgeMap edges = read_edges_json(read_file(dir / "edges.json"));
      std::map<std::string, SegmentationRaster> zones;
      for (const auto& frame : gt.frames()) {
        const fs::path p = dir / "zone" / (frame + ".pgm");
        if (fs::exists(p)) zones[frame] = read_mask_pgm(read_file(p));
      }
      const UsvDetReport report = evaluate_usv_det(
          det.records, gt.records, gt.frames(), edges, zones, gt.classes);
      return canonical_json(usv_det_report_to_json(report));
    }
    if (b.track == "usv-seg") {
      const CocoGtFile gt = parse_coco_gt_json(read_file(dir / "gt.json"));
      const WaterEdgeMap edges = read_edges_json(read_file(dir / "edges.json"));
      std::map<std::string, std::size_t> file_of;
      for (std::size_t i = 0; i < b.files.size(); ++i)
        file_of[b.files[i].name] = i;
      std::vector<EdgeFrameResult> edge_results;
      std::vector<SegFrameResult> det_results;
      for (const auto& frame : gt.frames()) {
        auto it = file_of.find(frame + ".pgm");
        if (it == file_of.end()) {
          throw InputError("submission is missing mask " + frame + ".pgm");
        }
        const SegmentationRaster pred = read_mask_pgm(bundle_file(b, it->second));
        const auto eit = edges.find(frame);
        if (eit == edges.end()) throw InputError("gt edge missing for " + frame);
        edge_results.push_back(water_edge_metrics(pred, eit->second));
        std::vector<BBox> boxes;
        for (const auto& g : gt.records)
          if (g.frame_id == frame && !g.ignore) boxes.push_back(g.bbox);
        SegmentationRaster zone;
        const fs::path zp = dir / "zone" / (frame + ".pgm");
        if (fs::exists(zp)) zone = read_mask_pgm(read_file(zp));
        det_results.push_back(
            obstacle_detection_from_mask(pred, boxes, eit->second, zone));
      }
      const SegReport report = seg_report(edge_results, det_results);
      return canonical_json(seg_report_to_json(report));
    }
    throw InputError("unknown track: " + b.track);
  }

  // Quick format validation at submit time; full scoring runs async.
  void validate_payload(const SubmissionBundle& b) const {
    if (b.track == "od" || b.track == "od-binary" || b.track == "usv-det") {
      if (b.files.size() != 1) throw InputError("expected one payload file");
      parse_coco_det_json(bundle_file(b, 0), {});
    } else if (b.track == "mot") {
      if (b.files.size() != 1) throw InputError("expected one payload file");
      parse_mot_csv(bundle_file(b, 0), "seq0");
    } else if (b.track == "usv-seg") {
      if (b.files.empty()) throw InputError("expected mask payload files");
      for (std::size_t i = 0; i < b.files.size(); ++i) {
        read_mask_pgm(bundle_file(b, i));
      }
    }
  }

  int quota_used(const std::string& user, std::int64_t now) const {
    auto it = upload_counts.find({user, now / 86400});
    return it == upload_counts.end() ? 0 : it->second;
  }

  std::string auth_user(const httplib::Request& req) const {
    const std::string header = req.get_header_value("Authorization");
    if (header.rfind("Bearer ", 0) != 0) return "";
    auto it = tokens.find(header.substr(7));
    return it == tokens.end() ? "" : it->second;
  }

  static void reply_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }

  void route();
};

void EvalService::Impl::route() {
  server.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
    res.set_content("ok", "text/plain");
  });

  server.Post(R"(/api/v1/tracks/([a-z\-]+)/submissions)",
              [this](const httplib::Request& req, httplib::Response& res) {
    const std::string track = req.matches[1];
    const auto& known = known_tracks();
    if (std::find(known.begin(), known.end(), track) == known.end()) {
      return reply_json(res, 404, {{"error", "unknown track"}});
    }
    const std::string user = auth_user(req);
    if (user.empty()) {
      return reply_json(res, 401, {{"error", "missing or invalid token"}});
    }

    SubmissionBundle bundle;
    bundle.track = track;
    bundle.model = req.get_file_value("model").content;
    bundle.declared_fps = req.get_file_value("fps").content;
    bundle.hardware = req.get_file_value("hardware").content;
    {
      std::istringstream ds(req.get_file_value("datasets").content);
      std::string item;
      while (std::getline(ds, item, ',')) {
        if (!item.empty()) bundle.datasets_used.push_back(item);
      }
    }
    if (bundle.model.empty() || bundle.hardware.empty() ||
        bundle.datasets_used.empty() || !valid_fps(bundle.declared_fps)) {
      return reply_json(
          res, 400,
          {{"error", "model, fps, hardware and datasets are required"}});
    }

    std::vector<std::pair<std::string, std::string>> files;
    for (const auto& [key, f] : req.files) {
      if (key == "payload") files.push_back({f.filename, f.content});
    }
    if (files.empty()) {
      return reply_json(res, 400, {{"error", "payload file is required"}});
    }

    std::lock_guard<std::mutex> lock(mu);
    const std::int64_t now = cfg.now_fn();
    if (quota_used(user, now) >= cfg.daily_quota) {
      return reply_json(res, 429,
                        {{"error", "daily submission quota exhausted"}});
    }
    for (auto& [name, content] : files) {
      const std::string sha = sha256_hex(content);
      if (!fs::exists(bundle_path(sha))) write_file(bundle_path(sha), content);
      bundle.files.push_back({name, sha});
    }
    try {
      validate_payload(bundle);
    } catch (const std::exception& e) {
      return reply_json(res, 422, {{"error", e.what()}});
    }

    Submission s;
    char idbuf[16];
    std::snprintf(idbuf, sizeof(idbuf), "s%06d", next_id++);
    s.id = idbuf;
    s.user = user;
    s.track = track;
    s.bundle = bundle;
    s.status = "queued";
    s.visible = true;
    s.created_at = now;
    subs[s.id] = s;
    ++upload_counts[{user, now / 86400}];
    append_journal({{"event", "created"},
                    {"id", s.id},
                    {"user", user},
                    {"track", track},
                    {"created_at", now},
                    {"bundle", bundle_to_json(bundle)}});
    queue.push_back(s.id);
    queue_cv.notify_one();
    reply_json(res, 202, {{"id", s.id}, {"status", "queued"}});
  });

  server.Get(R"(/api/v1/tracks/([a-z\-]+)/leaderboard)",
             [this](const httplib::Request& req, httplib::Response& res) {
    const std::string track = req.matches[1];
    const auto& known = known_tracks();
    if (std::find(known.begin(), known.end(), track) == known.end()) {
      return reply_json(res, 404, {{"error", "unknown track"}});
    }
    json entries = json::array();
    std::lock_guard<std::mutex> lock(mu);
    for (const auto& e : leaderboard_locked_impl(subs, track)) {
      entries.push_back({{"rank", e.rank},
                         {"id", e.submission_id},
                         {"model", e.model},
                         {"user", e.user},
                         {"fps", e.fps},
                         {"hardware", e.hardware},
                         {"primary", e.primary},
                         {"tiebreak", e.tiebreak}});
    }
    reply_json(res, 200, {{"track", track}, {"entries", entries}});
  });

  server.Get(R"(/api/v1/submissions/(s\d+))",
             [this](const httplib::Request& req, httplib::Response& res) {
    const std::string user = auth_user(req);
    if (user.empty()) return reply_json(res, 401, {{"error", "unauthorized"}});
    std::lock_guard<std::mutex> lock(mu);
    auto it = subs.find(req.matches[1]);
    if (it == subs.end()) return reply_json(res, 404, {{"error", "not found"}});
    if (it->second.user != user) {
      return reply_json(res, 403, {{"error", "not the owner"}});
    }
    json body = {{"id", it->second.id},
                 {"track", it->second.track},
                 {"status", it->second.status},
                 {"visible", it->second.visible},
                 {"created_at", it->second.created_at}};
    if (!it->second.report_json.empty()) {
      body["report"] = json::parse(it->second.report_json);
    }
    if (!it->second.failure.empty()) body["failure"] = it->second.failure;
    reply_json(res, 200, body);
  });

  server.Delete(R"(/api/v1/submissions/(s\d+))",
                [this](const httplib::Request& req, httplib::Response& res) {
    const std::string user = auth_user(req);
    if (user.empty()) return reply_json(res, 401, {{"error", "unauthorized"}});
    std::lock_guard<std::mutex> lock(mu);
    auto it = subs.find(req.matches[1]);
    if (it == subs.end()) return reply_json(res, 404, {{"error", "not found"}});
    if (it->second.user != user) {
      return reply_json(res, 403, {{"error", "not the owner"}});
    }
    append_journal({{"event", "deleted"}, {"id", it->second.id}});
    subs.erase(it);
    res.status = 204;
  });

  server.Patch(R"(/api/v1/submissions/(s\d+))",
               [this](const httplib::Request& req, httplib::Response& res) {
    const std::string user = auth_user(req);
    if (user.empty()) return reply_json(res, 401, {{"error", "unauthorized"}});
    json body = json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.contains("visible") ||
        !body.at("visible").is_boolean()) {
      return reply_json(res, 400, {{"error", "body must be {\"visible\": bool}"}});
    }
    std::lock_guard<std::mutex> lock(mu);
    auto it = subs.find(req.matches[1]);
    if (it == subs.end()) return reply_json(res, 404, {{"error", "not found"}});
    if (it->second.user != user) {
      return reply_json(res, 403, {{"error", "not the owner"}});
    }
    it->second.visible = body.at("visible").get<bool>();
    append_journal({{"event", "visibility"},
                    {"id", it->second.id},
                    {"visible", it->second.visible}});
    reply_json(res, 200, {{"id", it->second.id}, {"visible", it->second.visible}});
  });
}

namespace {

// Track-specific primary metric and tiebreaker from a report body.
std::pair<double, double> ranking_keys(const std::string& track, const json& r) {
  if (track == "od" || track == "od-binary")
    return {r.value("ap", 0.0), r.value("ap50", 0.0)};
  if (track == "mot") return {r.value("hota", 0.0), r.value("mota", 0.0)};
  if (track == "usv-seg") return {r.value("avg_score", 0.0), r.value("f1", 0.0)};
  return {r.value("f1_avg", 0.0), r.value("f1_1", 0.0)};
}

}  // namespace

std::vector<LeaderboardEntry> leaderboard_locked_impl(
    const std::map<std::string, Submission>& subs, const std::string& track) {
  std::vector<LeaderboardEntry> entries;
  for (const auto& [id, s] : subs) {
    if (s.track != track || s.status != "evaluated" || !s.visible) continue;
    LeaderboardEntry e;
    e.submission_id = id;
    e.model = s.bundle.model;
    e.user = s.user;
    e.fps = s.bundle.declared_fps;
    e.hardware = s.bundle.hardware;
    e.report_json = s.report_json;
    const json r = json::parse(s.report_json, nullptr, false);
    if (!r.is_discarded()) {
      std::tie(e.primary, e.tiebreak) = ranking_keys(track, r);
    }
    entries.push_back(std::move(e));
  }
  // Total order: primary desc, tiebreak desc, created_at asc, id asc.
  std::map<std::string, std::int64_t> created;
  for (const auto& [id, s] : subs) created[id] = s.created_at;
  std::sort(entries.begin(), entries.end(),
            [&](const LeaderboardEntry& a, const LeaderboardEntry& b) {
              if (a.primary != b.primary) return a.primary > b.primary;
              if (a.tiebreak != b.tiebreak) return a.tiebreak > b.tiebreak;
              if (created[a.submission_id] != created[b.submission_id])
                return created[a.submission_id] < created[b.submission_id];
              return a.submission_id < b.submission_id;
            });
  for (std::size_t i = 0; i < entries.size(); ++i)
    entries[i].rank = static_cast<int>(i) + 1;
  return entries;
}

EvalService::EvalService(ServiceConfig cfg) : impl_(new Impl(std::move(cfg))) {
  impl_->route();
}

EvalService::~EvalService() { stop(); }

void EvalService::start() {
  auto& impl = *impl_;
  if (impl.cfg.port == 0) {
    impl.bound_port = impl.server.bind_to_any_port("127.0.0.1");
    if (impl.bound_port <= 0) throw InputError("cannot bind a free port");
  } else {
    if (!impl.server.bind_to_port("127.0.0.1", impl.cfg.port)) {
      throw InputError("cannot bind port " + std::to_string(impl.cfg.port));
    }
    impl.bound_port = impl.cfg.port;
  }
  impl.server_thread = std::thread([&impl] { impl.server.listen_after_bind(); });
  impl.server.wait_until_ready();
}

void EvalService::stop() {
  if (!impl_) return;
  auto& impl = *impl_;
  if (impl.server.is_running()) impl.server.stop();
  if (impl.server_thread.joinable()) impl.server_thread.join();
  {
    std::lock_guard<std::mutex> lock(impl.mu);
    if (impl.stopping) return;
    impl.stopping = true;
  }
  impl.queue_cv.notify_all();
  for (auto& w : impl.workers) {
    if (w.joinable()) w.join();
  }
}

int EvalService::port() const { return impl_->bound_port; }

std::string EvalService::evaluate_bundle(const SubmissionBundle& bundle) const {
  return impl_->evaluate(bundle);
}

bool EvalService::wait_idle(double timeout_seconds) const {
  std::unique_lock<std::mutex> lock(impl_->mu);
  return impl_->idle_cv.wait_for(
      lock, std::chrono::milliseconds(static_cast<int>(timeout_seconds * 1000)),
      [this] { return impl_->queue.empty() && impl_->in_flight == 0; });
}

std::vector<Submission> EvalService::submissions() const {
  std::lock_guard<std::mutex> lock(impl_->mu);
  std::vector<Submission> out;
  for (const auto& [id, s] : impl_->subs) out.push_back(s);
  return out;
}

std::vector<LeaderboardEntry> EvalService::leaderboard(
    const std::string& track) const {
  std::lock_guard<std::mutex> lock(impl_->mu);
  return leaderboard_locked_impl(impl_->subs, track);
}

}  // namespace seaeval
