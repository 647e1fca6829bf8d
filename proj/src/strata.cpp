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

#include "seaeval/strata.hpp"

#include <algorithm>

#include "seaeval/errors.hpp"

namespace seaeval {

std::vector<double> equidistant_edges(double min_value, double max_value,
                                      int bins) {
  if (bins <= 0 || !(max_value > min_value)) {
    throw InputError("equidistant_edges needs bins > 0 and max > min");
  }
  std::vector<double> edges(bins + 1);
  const double step = (max_value - min_value) / bins;
  for (int i = 0; i <= bins; ++i) edges[i] = min_value + step * i;
  edges.back() = max_value;  // exact upper bound regardless of rounding
  return edges;
}

namespace {

// Bin index for v under edges; final interval right-closed. -1 when out of
// the configured range.
int numeric_bin(const std::vector<double>& edges, double v) {
  const int bins = static_cast<int>(edges.size()) - 1;
  if (v < edges.front() || v > edges.back()) return -1;
  for (int i = 0; i < bins - 1; ++i) {
    if (v >= edges[i] && v < edges[i + 1]) return i;
  }
  return bins - 1;
}

std::string default_label(const StratumSpec& spec, int bin) {
  if (bin < static_cast<int>(spec.labels.size())) return spec.labels[bin];
  if (spec.categorical()) return spec.categories[bin];
  return "bin" + std::to_string(bin);
}

}  // namespace

Partition stratify(const std::vector<std::string>& frames,
                   const FrameMetaMap& meta, const StratumSpec& spec) {
  int bins = 0;
  if (spec.categorical()) {
    bins = static_cast<int>(spec.categories.size());
  } else {
    if (spec.edges.size() < 2) throw InputError("numeric spec needs >= 2 edges");
    if (!std::is_sorted(spec.edges.begin(), spec.edges.end()) ||
        std::adjacent_find(spec.edges.begin(), spec.edges.end()) !=
            spec.edges.end()) {
      throw InputError("edges must be strictly increasing");
    }
    bins = static_cast<int>(spec.edges.size()) - 1;
  }

  Partition partition;
  for (int b = 0; b < bins; ++b) partition.push_back({default_label(spec, b), {}});
  partition.push_back({kUnknownStratum, {}});
  const std::size_t unknown = partition.size() - 1;
  std::size_t out_of_range = SIZE_MAX;

  for (const auto& frame : frames) {
    auto it = meta.find(frame);
    if (it == meta.end()) {
      partition[unknown].second.push_back(frame);
      continue;
    }
    if (spec.categorical()) {
      std::optional<std::string> v;
      if (spec.key == "camera_id") v = it->second.camera_id;
      if (!v) {
        partition[unknown].second.push_back(frame);
        continue;
      }
      const auto cat = std::find(spec.categories.begin(), spec.categories.end(), *v);
      if (cat == spec.categories.end()) {
        if (out_of_range == SIZE_MAX) {
          partition.push_back({"out_of_range", {}});
          out_of_range = partition.size() - 1;
        }
        partition[out_of_range].second.push_back(frame);
      } else {
        partition[cat - spec.categories.begin()].second.push_back(frame);
      }
      continue;
    }
    const auto v = it->second.numeric(spec.key);
    if (!v) {
      partition[unknown].second.push_back(frame);
      continue;
    }
    const int b = numeric_bin(spec.edges, *v);
    if (b < 0) {
      if (out_of_range == SIZE_MAX) {
        partition.push_back({"out_of_range", {}});
        out_of_range = partition.size() - 1;
      }
      partition[out_of_range].second.push_back(frame);
    } else {
      partition[static_cast<std::size_t>(b)].second.push_back(frame);
    }
  }

  // Drop the unknown stratum when it is empty; real bins stay even if empty
  // so callers can report them as absent explicitly.
  if (partition[unknown].second.empty()) {
    partition.erase(partition.begin() + static_cast<std::ptrdiff_t>(unknown));
  }
  return partition;
}

std::map<std::string, std::string> stratified_eval(
    const Partition& partition,
    const std::function<std::string(const std::vector<std::string>&)>&
        evaluator) {
  std::map<std::string, std::string> out;
  for (const auto& [label, frames] : partition) {
    if (frames.empty()) continue;  // EmptyStratum: absent, not zero
    out[label] = evaluator(frames);
  }
  return out;
}

std::vector<std::int64_t> Histogram2d::x_marginal() const {
  std::vector<std::int64_t> m(x_edges.size() - 1, 0);
  for (const auto& row : counts)
    for (std::size_t i = 0; i < m.size(); ++i) m[i] += row[i];
  return m;
}

std::vector<std::int64_t> Histogram2d::y_marginal() const {
  std::vector<std::int64_t> m(y_edges.size() - 1, 0);
  for (std::size_t j = 0; j < m.size(); ++j)
    for (const auto v : counts[j]) m[j] += v;
  return m;
}

Histogram2d meta_histogram2d(const FrameMetaMap& meta, const std::string& key_x,
                             const std::string& key_y,
                             const std::vector<double>& x_edges,
                             const std::vector<double>& y_edges) {
  if (x_edges.size() < 2 || y_edges.size() < 2) {
    throw InputError("histogram needs >= 2 edges per axis");
  }
  Histogram2d h;
  h.x_edges = x_edges;
  h.y_edges = y_edges;
  h.counts.assign(y_edges.size() - 1,
                  std::vector<std::int64_t>(x_edges.size() - 1, 0));
  for (const auto& [frame, m] : meta) {
    (void)frame;
    const auto vx = m.numeric(key_x);
    const auto vy = m.numeric(key_y);
    if (!vx || !vy) continue;
    const int bx = numeric_bin(x_edges, *vx);
    const int by = numeric_bin(y_edges, *vy);
    if (bx < 0 || by < 0) continue;
    ++h.counts[static_cast<std::size_t>(by)][static_cast<std::size_t>(bx)];
    ++h.total;
  }
  return h;
}

}  // namespace seaeval
