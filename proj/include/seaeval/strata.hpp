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

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "seaeval/core.hpp"

namespace seaeval {

inline const char* kUnknownStratum = "unknown";

// Numeric stratification uses `edges` (n+1 boundaries for n bins, strictly
// increasing; final interval right-closed so max-valued frames bin).
// Categorical stratification matches `categories` values instead. Frames
// with the key absent always land in the "unknown" stratum.
struct StratumSpec {
  std::string key;
  std::vector<double> edges;
  std::vector<std::string> labels;
  std::vector<std::string> categories;

  bool categorical() const { return !categories.empty(); }
};

// Equidistant bin edges over a configured range; (5, 260, 3) yields
// {5, 90, 175, 260}.
std::vector<double> equidistant_edges(double min_value, double max_value,
                                      int bins);

// Label order preserved: spec labels first, then "unknown" (when non-empty),
// then out-of-range frames under "out_of_range" (numeric specs only).
using Partition = std::vector<std::pair<std::string, std::vector<std::string>>>;

Partition stratify(const std::vector<std::string>& frames,
                   const FrameMetaMap& meta, const StratumSpec& spec);

// Re-runs a track evaluator per stratum. The evaluator receives the
// stratum's frame subset (manifest order preserved) and returns its
// serialized report; empty strata are reported as absent.
std::map<std::string, std::string> stratified_eval(
    const Partition& partition,
    const std::function<std::string(const std::vector<std::string>&)>&
        evaluator);

struct Histogram2d {
  std::vector<double> x_edges;
  std::vector<double> y_edges;
  std::vector<std::vector<std::int64_t>> counts;  // [y_bin][x_bin]
  std::int64_t total = 0;                         // frames with both keys

  std::vector<std::int64_t> x_marginal() const;
  std::vector<std::int64_t> y_marginal() const;
};

Histogram2d meta_histogram2d(const FrameMetaMap& meta, const std::string& key_x,
                             const std::string& key_y,
                             const std::vector<double>& x_edges,
                             const std::vector<double>& y_edges);

}  // namespace seaeval
