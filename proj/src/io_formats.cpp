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

#include "seaeval/io_formats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "seaeval/errors.hpp"

namespace seaeval {

double round4(double v) {
  if (!std::isfinite(v)) return 0.0;
  const double r = std::round(v * 10000.0) / 10000.0;
  return r == 0.0 ? 0.0 : r;  // normalize -0
}

std::string canonical_json(const json& j) {
  return j.dump(2) + "\n";
}

namespace {

json parse_or_throw(const std::string& bytes, const char* what) {
  json j = json::parse(bytes, nullptr, false);
  if (j.is_discarded()) {
    throw MalformedJson(std::string(what) + ": invalid JSON");
  }
  return j;
}

// Frame ids written back as numbers when they are canonical decimal
// integers, matching the common numeric image_id convention.
json frame_id_to_json(const std::string& id) {
  if (id.empty() || id.size() > 18) return id;
  if (id.size() > 1 && id[0] == '0') return id;  // keep zero-padding as text
  std::int64_t v = 0;
  const auto res = std::from_chars(id.data(), id.data() + id.size(), v);
  if (res.ec == std::errc() && res.ptr == id.data() + id.size()) return v;
  return id;
}

std::string json_to_frame_id(const json& j, const char* what) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<std::int64_t>());
  if (j.is_number_unsigned()) return std::to_string(j.get<std::uint64_t>());
  throw MalformedJson(std::string(what) + ": frame id must be string or integer");
}

BBox bbox_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 4) {
    throw MalformedJson(std::string(what) + ": bbox must be [x, y, w, h]");
  }
  for (const auto& v : j) {
    if (!v.is_number()) {
      throw MalformedJson(std::string(what) + ": bbox entries must be numbers");
    }
  }
  BBox b{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(),
         j[3].get<double>()};
  if (b.w < 0.0 || b.h < 0.0) {
    throw NegativeDimensions(std::string(what) + ": bbox w/h must be >= 0");
  }
  return b;
}

json extra_fields(const json& obj, const std::set<std::string>& known) {
  json extra = json::object();
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!known.count(it.key())) extra[it.key()] = it.value();
  }
  return extra;
}

}  // namespace

std::vector<std::string> CocoGtFile::frames() const {
  std::vector<std::string> out;
  out.reserve(images.size());
  for (const auto& im : images) out.push_back(im.id);
  return out;
}

std::map<int, int> CocoGtFile::category_to_class() const {
  std::map<int, int> m;
  for (std::size_t i = 0; i < category_ids.size(); ++i) {
    m[category_ids[i]] = static_cast<int>(i);
  }
  return m;
}

CocoGtFile parse_coco_gt_json(const std::string& bytes) {
  const json j = parse_or_throw(bytes, "gt");
  if (!j.is_object()) throw MalformedJson("gt: top level must be an object");
  CocoGtFile file;

  std::vector<std::string> names;
  std::map<int, int> cat_to_class;
  if (j.contains("categories")) {
    for (const auto& c : j.at("categories")) {
      if (!c.contains("id") || !c.contains("name")) {
        throw MalformedJson("gt: category needs id and name");
      }
      cat_to_class[c.at("id").get<int>()] = static_cast<int>(names.size());
      names.push_back(c.at("name").get<std::string>());
      file.category_ids.push_back(c.at("id").get<int>());
    }
  }
  file.classes = ClassTable(names);

  std::set<std::string> declared;
  if (j.contains("images")) {
    for (const auto& im : j.at("images")) {
      CocoImage image;
      image.id = json_to_frame_id(im.at("id"), "gt image");
      image.extra = extra_fields(im, {"id"});
      if (!declared.insert(image.id).second) {
        throw MalformedJson("gt: duplicate image id " + image.id);
      }
      file.images.push_back(std::move(image));
    }
  }

  if (j.contains("annotations")) {
    for (const auto& a : j.at("annotations")) {
      GroundTruthRecord rec;
      rec.frame_id = json_to_frame_id(a.at("image_id"), "gt annotation");
      if (!declared.count(rec.frame_id)) {
        throw MalformedJson("gt: annotation references undeclared image " +
                            rec.frame_id);
      }
      rec.bbox = bbox_from_json(a.at("bbox"), "gt annotation");
      const int cat = a.at("category_id").get<int>();
      auto it = cat_to_class.find(cat);
      if (it == cat_to_class.end()) {
        throw UnknownCategory("gt: category id " + std::to_string(cat));
      }
      rec.class_id = it->second;
      if (a.contains("id")) rec.id = a.at("id").get<std::int64_t>();
      if (a.contains("ignore")) {
        const auto& ig = a.at("ignore");
        rec.ignore = ig.is_boolean() ? ig.get<bool>() : ig.get<int>() != 0;
      }
      if (a.contains("exhaustive")) rec.exhaustive = a.at("exhaustive").get<bool>();
      file.record_extras.push_back(extra_fields(
          a, {"image_id", "bbox", "category_id", "id", "ignore", "exhaustive"}));
      file.records.push_back(std::move(rec));
    }
  }

  file.top_extra =
      extra_fields(j, {"images", "annotations", "categories", "format_version"});
  return file;
}

std::string write_coco_gt_json(const CocoGtFile& file) {
  json j = file.top_extra.is_object() ? file.top_extra : json::object();
  j["format_version"] = kFormatVersion;
  json images = json::array();
  for (const auto& im : file.images) {
    json o = im.extra.is_object() ? im.extra : json::object();
    o["id"] = frame_id_to_json(im.id);
    images.push_back(std::move(o));
  }
  j["images"] = std::move(images);
  json cats = json::array();
  for (std::size_t i = 0; i < file.classes.size(); ++i) {
    const int id = i < file.category_ids.size() ? file.category_ids[i]
                                                : static_cast<int>(i) + 1;
    cats.push_back({{"id", id}, {"name", file.classes.name(static_cast<int>(i))}});
  }
  j["categories"] = std::move(cats);
  json anns = json::array();
  for (std::size_t k = 0; k < file.records.size(); ++k) {
    const auto& rec = file.records[k];
    json o = k < file.record_extras.size() && file.record_extras[k].is_object()
                 ? file.record_extras[k]
                 : json::object();
    o["image_id"] = frame_id_to_json(rec.frame_id);
    o["bbox"] = {rec.bbox.x, rec.bbox.y, rec.bbox.w, rec.bbox.h};
    const int cat = static_cast<std::size_t>(rec.class_id) < file.category_ids.size()
                        ? file.category_ids[rec.class_id]
                        : rec.class_id + 1;
    o["category_id"] = cat;
    if (rec.id >= 0) o["id"] = rec.id;
    if (rec.ignore) o["ignore"] = true;
    if (!rec.exhaustive) o["exhaustive"] = false;
    anns.push_back(std::move(o));
  }
  j["annotations"] = std::move(anns);
  return canonical_json(j);
}

CocoDetFile parse_coco_det_json(const std::string& bytes,
                                const std::map<int, int>& category_to_class) {
  const json j = parse_or_throw(bytes, "detections");
  if (!j.is_array()) {
    throw MalformedJson("detections: top level must be an array");
  }
  CocoDetFile file;
  for (const auto& a : j) {
    DetectionRecord rec;
    rec.frame_id = json_to_frame_id(a.at("image_id"), "detection");
    rec.bbox = bbox_from_json(a.at("bbox"), "detection");
    const int cat = a.at("category_id").get<int>();
    if (category_to_class.empty()) {
      rec.class_id = cat;
    } else {
      auto it = category_to_class.find(cat);
      if (it == category_to_class.end()) {
        throw UnknownCategory("detections: category id " + std::to_string(cat));
      }
      rec.class_id = it->second;
    }
    rec.score = a.at("score").get<double>();
    if (!(rec.score >= 0.0 && rec.score <= 1.0)) {
      throw MalformedJson("detections: score must be in [0, 1]");
    }
    file.record_extras.push_back(
        extra_fields(a, {"image_id", "bbox", "category_id", "score"}));
    file.records.push_back(std::move(rec));
  }
  return file;
}

std::string write_coco_det_json(const CocoDetFile& file,
                                const std::vector<int>& category_ids) {
  json arr = json::array();
  for (std::size_t k = 0; k < file.records.size(); ++k) {
    const auto& rec = file.records[k];
    json o = k < file.record_extras.size() && file.record_extras[k].is_object()
                 ? file.record_extras[k]
                 : json::object();
    o["image_id"] = frame_id_to_json(rec.frame_id);
    o["bbox"] = {rec.bbox.x, rec.bbox.y, rec.bbox.w, rec.bbox.h};
    o["category_id"] = static_cast<std::size_t>(rec.class_id) < category_ids.size()
                           ? category_ids[rec.class_id]
                           : rec.class_id;
    o["score"] = rec.score;
    arr.push_back(std::move(o));
  }
  return canonical_json(arr);
}

// ---------------------------------------------------------------------------

MotCsvFile parse_mot_csv(const std::string& bytes,
                         const std::string& sequence_id) {
  MotCsvFile out;
  out.tracks.sequence_id = sequence_id;

  struct Row {
    std::int64_t frame;
    TrackEntry entry;
  };
  std::vector<Row> rows;
  std::set<std::pair<std::int64_t, std::int64_t>> seen;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= bytes.size()) {
    const std::size_t eol = bytes.find('\n', pos);
    std::string line = bytes.substr(
        pos, eol == std::string::npos ? std::string::npos : eol - pos);
    pos = eol == std::string::npos ? bytes.size() + 1 : eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      fields.push_back(line.substr(
          start, comma == std::string::npos ? std::string::npos : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 9) {
      throw InputError("mot csv line " + std::to_string(line_no) +
                       ": expected 9 fields, got " +
                       std::to_string(fields.size()));
    }
    auto parse_i64 = [&](const std::string& s) {
      std::int64_t v = 0;
      const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
      if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw InputError("mot csv line " + std::to_string(line_no) +
                         ": bad integer '" + s + "'");
      }
      return v;
    };
    auto parse_f64 = [&](const std::string& s) {
      double v = 0.0;
      const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
      if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw InputError("mot csv line " + std::to_string(line_no) +
                         ": bad number '" + s + "'");
      }
      return v;
    };
    Row row;
    row.frame = parse_i64(fields[0]);
    row.entry.track_id = parse_i64(fields[1]);
    row.entry.bbox = {parse_f64(fields[2]), parse_f64(fields[3]),
                      parse_f64(fields[4]), parse_f64(fields[5])};
    row.entry.score = parse_f64(fields[6]);
    row.entry.class_id = static_cast<int>(parse_i64(fields[7]));
    parse_f64(fields[8]);  // visibility: validated, not retained
    if (!seen.insert({row.frame, row.entry.track_id}).second) {
      throw DuplicatePair("mot csv: duplicate (frame, id) = (" +
                          std::to_string(row.frame) + ", " +
                          std::to_string(row.entry.track_id) + ")");
    }
    rows.push_back(std::move(row));
  }

  bool sorted = true;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].frame < rows[i - 1].frame) {
      sorted = false;
      break;
    }
  }
  if (!sorted) {
    out.warnings.push_back("non-monotone frame order: input was sorted");
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.frame != b.frame) return a.frame < b.frame;
    return a.entry.track_id < b.entry.track_id;
  });

  std::set<std::int64_t> frames;
  for (const auto& r : rows) frames.insert(r.frame);
  for (const auto f : frames) out.tracks.frames.push_back(std::to_string(f));
  for (auto& r : rows) {
    r.entry.frame_id = std::to_string(r.frame);
    out.tracks.entries.push_back(std::move(r.entry));
  }
  return out;
}

std::string write_mot_csv(const TrackSet& tracks) {
  std::string out;
  char buf[256];
  for (const auto& e : tracks.entries) {
    std::snprintf(buf, sizeof(buf), "%s,%lld,%.6g,%.6g,%.6g,%.6g,%.6g,%d,1\n",
                  e.frame_id.c_str(), static_cast<long long>(e.track_id),
                  e.bbox.x, e.bbox.y, e.bbox.w, e.bbox.h, e.score, e.class_id);
    out += buf;
  }
  return out;
}

// ---------------------------------------------------------------------------

SegmentationRaster read_mask_pgm(const std::string& bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
    throw BadMagic("mask is not a binary portable graymap (P5)");
  }
  std::size_t pos = 2;
  auto next_token = [&]() -> std::string {
    for (;;) {
      while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos])))
        ++pos;
      if (pos < bytes.size() && bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
        continue;
      }
      break;
    }
    const std::size_t start = pos;
    while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos])))
      ++pos;
    if (start == pos) throw InputError("truncated pgm header");
    return bytes.substr(start, pos - start);
  };
  auto parse_dim = [](const std::string& tok) {
    int v = 0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
      throw InputError("bad pgm header token '" + tok + "'");
    }
    return v;
  };
  const int w = parse_dim(next_token());
  const int h = parse_dim(next_token());
  const int maxval = parse_dim(next_token());
  if (w <= 0 || h <= 0) throw InputError("pgm dimensions must be positive");
  if (maxval != 255) throw InputError("pgm maxval must be 255");
  ++pos;  // single whitespace after maxval
  const std::size_t need = static_cast<std::size_t>(w) * h;
  if (bytes.size() - pos < need) throw InputError("pgm pixel data truncated");

  SegmentationRaster raster(w, h, 0);
  for (std::size_t i = 0; i < need; ++i) {
    const auto v = static_cast<std::uint8_t>(bytes[pos + i]);
    if (!SegmentationRaster::valid_class(v)) {
      throw IndexOutOfSet("pgm pixel value " + std::to_string(v) +
                          " is not a known class index");
    }
    raster.data[i] = v;
  }
  return raster;
}

std::string write_mask_pgm(const SegmentationRaster& raster) {
  std::string out = "P5\n" + std::to_string(raster.width) + " " +
                    std::to_string(raster.height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(raster.data.data()),
             raster.data.size());
  return out;
}

// ---------------------------------------------------------------------------

MetaFile read_meta_sidecar(const std::string& bytes) {
  const json j = parse_or_throw(bytes, "meta");
  if (!j.is_object() || !j.contains("frames")) {
    throw MalformedJson("meta: expected {\"frames\": {...}}");
  }
  MetaFile out;
  for (auto it = j.at("frames").begin(); it != j.at("frames").end(); ++it) {
    FrameMeta m;
    const json& o = it.value();
    auto load = [&](const char* key, std::optional<double>& slot) {
      if (!o.contains(key)) return;
      const double v = o.at(key).get<double>();
      if (auto violation = meta_range_violation(key, v)) {
        out.warnings.push_back("frame " + it.key() + ": " + *violation +
                               " (field dropped)");
        return;
      }
      slot = v;
    };
    load("altitude", m.altitude);
    load("gimbal_pitch", m.gimbal_pitch);
    load("uav_roll", m.uav_roll);
    load("uav_pitch", m.uav_pitch);
    load("uav_yaw", m.uav_yaw);
    load("speed_x", m.speed_x);
    load("speed_y", m.speed_y);
    load("speed_z", m.speed_z);
    load("latitude", m.latitude);
    load("longitude", m.longitude);
    if (o.contains("camera_id")) m.camera_id = o.at("camera_id").get<std::string>();
    if (o.contains("timestamp")) m.timestamp = o.at("timestamp").get<std::string>();
    out.meta[it.key()] = std::move(m);
  }
  return out;
}

std::string write_meta_sidecar(const FrameMetaMap& meta) {
  json frames = json::object();
  for (const auto& [id, m] : meta) {
    json o = json::object();
    auto put = [&](const char* key, const std::optional<double>& v) {
      if (v) o[key] = *v;
    };
    put("altitude", m.altitude);
    put("gimbal_pitch", m.gimbal_pitch);
    put("uav_roll", m.uav_roll);
    put("uav_pitch", m.uav_pitch);
    put("uav_yaw", m.uav_yaw);
    put("speed_x", m.speed_x);
    put("speed_y", m.speed_y);
    put("speed_z", m.speed_z);
    put("latitude", m.latitude);
    put("longitude", m.longitude);
    if (m.camera_id) o["camera_id"] = *m.camera_id;
    if (m.timestamp) o["timestamp"] = *m.timestamp;
    frames[id] = std::move(o);
  }
  return canonical_json({{"format_version", kFormatVersion}, {"frames", frames}});
}

// ---------------------------------------------------------------------------

WaterEdgeMap read_edges_json(const std::string& bytes) {
  const json j = parse_or_throw(bytes, "edges");
  if (!j.is_object() || !j.contains("frames")) {
    throw MalformedJson("edges: expected {\"frames\": {...}}");
  }
  WaterEdgeMap out;
  for (auto it = j.at("frames").begin(); it != j.at("frames").end(); ++it) {
    WaterEdge edge;
    for (const auto& line : it.value()) {
      Polyline poly;
      for (const auto& v : line) {
        if (!v.is_array() || v.size() != 2) {
          throw MalformedJson("edges: vertex must be [x, y]");
        }
        poly.push_back({v[0].get<double>(), v[1].get<double>()});
      }
      if (poly.size() < 2) {
        throw MalformedJson("edges: polyline needs >= 2 vertices");
      }
      edge.polylines.push_back(std::move(poly));
    }
    out[it.key()] = std::move(edge);
  }
  return out;
}

std::string write_edges_json(const WaterEdgeMap& edges) {
  json frames = json::object();
  for (const auto& [id, edge] : edges) {
    json lines = json::array();
    for (const auto& line : edge.polylines) {
      json pts = json::array();
      for (const auto& [x, y] : line) pts.push_back({x, y});
      lines.push_back(std::move(pts));
    }
    frames[id] = std::move(lines);
  }
  return canonical_json({{"format_version", kFormatVersion}, {"frames", frames}});
}

ZoneProjection read_zone_spec_json(const std::string& bytes) {
  const json j = parse_or_throw(bytes, "zone spec");
  ZoneProjection out;
  const json& cam = j.at("camera");
  out.camera.fx = cam.at("fx").get<double>();
  out.camera.fy = cam.at("fy").get<double>();
  out.camera.cx = cam.at("cx").get<double>();
  out.camera.cy = cam.at("cy").get<double>();
  out.camera.width = cam.at("width").get<int>();
  out.camera.height = cam.at("height").get<int>();
  const json& zone = j.at("zone");
  if (zone.contains("radius")) out.zone.radius = zone.at("radius").get<double>();
  out.zone.camera_height = zone.at("camera_height").get<double>();
  if (zone.contains("roll")) out.zone.roll = zone.at("roll").get<double>();
  if (zone.contains("pitch")) out.zone.pitch = zone.at("pitch").get<double>();
  return out;
}

std::string write_zone_spec_json(const ZoneProjection& spec) {
  return canonical_json(
      {{"format_version", kFormatVersion},
       {"camera",
        {{"fx", spec.camera.fx},
         {"fy", spec.camera.fy},
         {"cx", spec.camera.cx},
         {"cy", spec.camera.cy},
         {"width", spec.camera.width},
         {"height", spec.camera.height}}},
       {"zone",
        {{"radius", spec.zone.radius},
         {"camera_height", spec.zone.camera_height},
         {"roll", spec.zone.roll},
         {"pitch", spec.zone.pitch}}}});
}

// ---------------------------------------------------------------------------

json od_report_to_json(const OdReport& report) {
  json per_class = json::object();
  for (const auto& [name, ap] : report.per_class_ap) per_class[name] = round4(ap);
  json area = json::object();
  for (const auto& [name, ap] : report.area_ap) area[name] = round4(ap);
  return {{"format_version", kFormatVersion},
          {"track", "od"},
          {"ap", round4(report.ap)},
          {"ap50", round4(report.ap50)},
          {"ap75", round4(report.ap75)},
          {"ar1", round4(report.ar1)},
          {"ar10", round4(report.ar10)},
          {"binary_ap", round4(report.binary_ap)},
          {"per_class_ap", per_class},
          {"area_ap", area},
          {"warnings", report.warnings}};
}

json tide_report_to_json(const TideReport& report) {
  return {{"format_version", kFormatVersion},
          {"track", "od"},
          {"base_ap", round4(report.base_ap)},
          {"counts",
           {{"classification", report.classification},
            {"localization", report.localization},
            {"both", report.both},
            {"duplicate", report.duplicate},
            {"background", report.background},
            {"missed", report.missed}}},
          {"delta_ap",
           {{"classification", round4(report.dap_classification)},
            {"localization", round4(report.dap_localization)},
            {"both", round4(report.dap_both)},
            {"duplicate", round4(report.dap_duplicate)},
            {"background", round4(report.dap_background)},
            {"missed", round4(report.dap_missed)},
            {"false_positive", round4(report.dap_false_positive)},
            {"false_negative", round4(report.dap_false_negative)}}}};
}

json mot_report_to_json(const MotReport& report) {
  json per_seq = json::object();
  for (const auto& [seq, hota] : report.per_sequence_hota)
    per_seq[seq] = round4(hota);
  return {{"format_version", kFormatVersion},
          {"track", "mot"},
          {"hota", round4(report.hota)},
          {"mota", round4(report.mota)},
          {"idf1", round4(report.idf1)},
          {"motp", round4(report.motp)},
          {"recall", round4(report.recall)},
          {"precision", round4(report.precision)},
          {"mostly_tracked", report.mostly_tracked},
          {"mostly_lost", report.mostly_lost},
          {"false_positives", report.false_positives},
          {"false_negatives", report.false_negatives},
          {"id_switches", report.id_switches},
          {"fragmentations", report.fragmentations},
          {"true_positives", report.true_positives},
          {"gt_count", report.gt_count},
          {"gt_track_count", report.gt_track_count},
          {"per_sequence_hota", per_seq}};
}

json seg_report_to_json(const SegReport& report) {
  json bins = json::array();
  for (const double f : report.size_binned_f1) bins.push_back(round4(f));
  return {{"format_version", kFormatVersion},
          {"track", "usv-seg"},
          {"mu_a", round4(report.mu_a)},
          {"mu_r", round4(report.mu_r)},
          {"precision", round4(report.precision)},
          {"recall", round4(report.recall)},
          {"f1", round4(report.f1)},
          {"precision_danger", round4(report.precision_danger)},
          {"recall_danger", round4(report.recall_danger)},
          {"f1_danger", round4(report.f1_danger)},
          {"avg_score", round4(report.avg_score)},
          {"size_binned_f1", bins},
          {"counts",
           {{"tp", report.tp},
            {"fp", report.fp},
            {"fn", report.fn},
            {"tp_danger", report.tp_danger},
            {"fp_danger", report.fp_danger},
            {"fn_danger", report.fn_danger}}}};
}

json usv_det_report_to_json(const UsvDetReport& report) {
  auto counts = [](const UsvDetCounts& c) {
    return json{{"tp", c.tp},
                {"fp", c.fp},
                {"fn", c.fn},
                {"precision", round4(c.precision())},
                {"recall", round4(c.recall())}};
  };
  return {{"format_version", kFormatVersion},
          {"track", "usv-det"},
          {"f1_1", round4(report.f1_1)},
          {"f1_2", round4(report.f1_2)},
          {"f1_3", round4(report.f1_3)},
          {"f1_avg", round4(report.f1_avg)},
          {"components",
           {{"class_aware", counts(report.counts_1)},
            {"class_agnostic", counts(report.counts_2)},
            {"danger_zone", counts(report.counts_3)}}},
          {"discarded_above_edge", report.discarded_above_edge},
          {"fp_suppressed_non_exhaustive", report.fp_suppressed_non_exhaustive}};
}

std::string pr_curves_to_csv(const OdReport& report, const ClassTable& classes) {
  std::string out = "class,iou_threshold,recall,precision\n";
  char buf[128];
  for (const auto& [key, curve] : report.pr_curves) {
    for (int k = 0; k < static_cast<int>(curve.size()); ++k) {
      std::snprintf(buf, sizeof(buf), "%s,%.2f,%.2f,%.4f\n",
                    classes.name(key.class_id).c_str(), key.iou_threshold,
                    k / 100.0, curve[static_cast<std::size_t>(k)]);
      out += buf;
    }
  }
  return out;
}

}  // namespace seaeval
