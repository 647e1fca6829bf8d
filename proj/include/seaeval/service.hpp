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

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace seaeval {

struct ServiceConfig {
  std::string data_dir;
  int port = 8080;          // 0 picks a free port
  int daily_quota = 3;      // accepted uploads per user per UTC day
  int workers = 2;
  std::function<std::int64_t()> now_fn;  // unix seconds; default system clock
};

struct BundleFile {
  std::string name;
  std::string sha256;  // content address under <data_dir>/bundles/
};

struct SubmissionBundle {
  std::string track;  // od | od-binary | mot | usv-seg | usv-det
  std::string model;
  std::string declared_fps;  // positive number or "unmeasured"
  std::string hardware;
  std::vector<std::string> datasets_used;
  std::vector<BundleFile> files;
};

struct Submission {
  std::string id;
  std::string user;
  std::string track;
  SubmissionBundle bundle;
  std::string status;       // queued | evaluated | failed
  std::string report_json;  // present iff status == evaluated
  std::string failure;
  bool visible = true;
  std::int64_t created_at = 0;
};

struct LeaderboardEntry {
  int rank = 0;
  std::string submission_id;
  std::string model;
  std::string user;
  std::string fps;
  std::string hardware;
  double primary = 0.0;
  double tiebreak = 0.0;
  std::string report_json;
};

// Submission/evaluation/leaderboard service. State is an append-only event
// journal plus content-addressed bundle files under data_dir; construction
// replays the journal, so a restart resumes exactly where the previous
// process stopped (queued submissions are re-enqueued).
class EvalService {
 public:
  explicit EvalService(ServiceConfig cfg);
  ~EvalService();

  EvalService(const EvalService&) = delete;
  EvalService& operator=(const EvalService&) = delete;

  // Binds and serves on cfg.port in background threads.
  void start();
  void stop();
  int port() const;

  // Deterministic evaluation of a stored bundle against the track's ground
  // truth; re-running on the same bundle yields identical bytes.
  std::string evaluate_bundle(const SubmissionBundle& bundle) const;

  // Blocks until the evaluation queue drains (test convenience).
  bool wait_idle(double timeout_seconds = 30.0) const;

  std::vector<Submission> submissions() const;
  std::vector<LeaderboardEntry> leaderboard(const std::string& track) const;

  static const std::vector<std::string>& known_tracks();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::string sha256_hex(const std::string& bytes);

}  // namespace seaeval
