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

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "seaeval/errors.hpp"
#include "seaeval/fixtures.hpp"
#include "seaeval/io_formats.hpp"
#include "seaeval/usv_det.hpp"
#include "seaeval/usv_seg.hpp"
#include "seaeval/mot_metrics.hpp"
#include "seaeval/od_metrics.hpp"
#include "seaeval/parallel.hpp"
#include "seaeval/service.hpp"
#include "seaeval/strata.hpp"

namespace fs = std::filesystem;
using namespace seaeval;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot read file: " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

void spit(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write file: " + path);
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-") {
    std::cout << content;
  } else {
    spit(out_path, content);
  }
}

// Zone masks either rasterized per frame on disk or projected once from a
// static camera/zone spec.
std::map<std::string, SegmentationRaster> load_zone_masks(
    const std::string& zone_dir, const std::string& zone_spec,
    const std::vector<std::string>& frames) {
  std::map<std::string, SegmentationRaster> zones;
  if (!zone_dir.empty()) {
    for (const auto& frame : frames) {
      const fs::path p = fs::path(zone_dir) / (frame + ".pgm");
      if (fs::exists(p)) zones[frame] = read_mask_pgm(slurp(p.string()));
    }
  } else if (!zone_spec.empty()) {
    const ZoneProjection spec = read_zone_spec_json(slurp(zone_spec));
    const SegmentationRaster mask = project_danger_zone(spec.camera, spec.zone);
    for (const auto& frame : frames) zones[frame] = mask;
  }
  return zones;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"evaluation toolkit for maritime UAV/USV perception benchmarks"};
  app.require_subcommand(1);

  std::string gt_path, preds_path, meta_path, edges_path, out_path, pr_csv_path;
  std::string zone_dir, zone_spec, pred_masks_dir, data_dir, key = "altitude";
  std::string motion = "static", perturb_json, fixtures_dir, config_path;
  std::vector<double> edges_opt;
  bool binary = false, macro = false;
  int jobs = 0, seed = 1, frames_n = 10, port = 8080, quota = 3, bins = 3;
  std::vector<int> objects = {2, 1};
  double range_min = 0.0, range_max = 0.0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", out_path, "output report path (default: stdout)");
    cmd->add_option("--jobs", jobs,
                    "worker threads (default: all cores; 1 = reference run)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--config", config_path,
                    "JSON config file overriding evaluator defaults");
  };

  auto* eval_od = app.add_subcommand("eval-od", "COCO-style detection metrics");
  eval_od->add_option("--gt", gt_path, "ground-truth json")->required();
  eval_od->add_option("--preds", preds_path, "detections json")->required();
  eval_od->add_flag("--binary", binary, "collapse classes onto non-water");
  eval_od->add_option("--pr-csv", pr_csv_path, "write PR curves as CSV");
  add_common(eval_od);

  auto* eval_mot = app.add_subcommand("eval-mot", "multi-object tracking metrics");
  eval_mot->add_option("--gt", gt_path, "gt csv file or directory")->required();
  eval_mot->add_option("--preds", preds_path, "pred csv file or directory")
      ->required();
  add_common(eval_mot);

  auto* eval_seg = app.add_subcommand("eval-seg", "obstacle segmentation metrics");
  eval_seg->add_option("--gt", gt_path, "ground-truth boxes json")->required();
  eval_seg->add_option("--pred-masks", pred_masks_dir, "directory of <frame>.pgm")
      ->required();
  eval_seg->add_option("--gt-edges", edges_path, "water-edge json")->required();
  eval_seg->add_option("--zone-masks", zone_dir, "directory of zone pgms");
  eval_seg->add_option("--zone-spec", zone_spec, "camera/zone projection json");
  eval_seg->add_flag("--macro", macro, "macro-average Pr/Re over frames");
  add_common(eval_seg);

  auto* eval_usv = app.add_subcommand("eval-usv-det", "obstacle detection metrics");
  eval_usv->add_option("--gt", gt_path, "ground-truth json")->required();
  eval_usv->add_option("--preds", preds_path, "detections json")->required();
  eval_usv->add_option("--gt-edges", edges_path, "water-edge json")->required();
  eval_usv->add_option("--zone-masks", zone_dir, "directory of zone pgms");
  eval_usv->add_option("--zone-spec", zone_spec, "camera/zone projection json");
  add_common(eval_usv);

  auto* tide = app.add_subcommand("tide", "detection error decomposition");
  tide->add_option("--gt", gt_path, "ground-truth json")->required();
  tide->add_option("--preds", preds_path, "detections json")->required();
  add_common(tide);

  auto* stratify_cmd =
      app.add_subcommand("stratify", "metadata-stratified detection evaluation");
  stratify_cmd->add_option("--gt", gt_path, "ground-truth json")->required();
  stratify_cmd->add_option("--preds", preds_path, "detections json")->required();
  stratify_cmd->add_option("--meta", meta_path, "frame metadata json")->required();
  stratify_cmd->add_option("--key", key, "meta key (altitude, gimbal_pitch, ...)");
  stratify_cmd->add_option("--edges", edges_opt, "explicit bin edges");
  stratify_cmd->add_option("--min", range_min, "range min for equidistant bins");
  stratify_cmd->add_option("--max", range_max, "range max for equidistant bins");
  stratify_cmd->add_option("--bins", bins, "number of equidistant bins");
  add_common(stratify_cmd);

  auto* fixtures_cmd =
      app.add_subcommand("fixtures", "write a deterministic synthetic scenario");
  fixtures_cmd->add_option("--out", fixtures_dir, "output directory")->required();
  fixtures_cmd->add_option("--seed", seed, "generator seed");
  fixtures_cmd->add_option("--frames", frames_n, "frame count");
  fixtures_cmd->add_option("--objects", objects, "objects per class");
  fixtures_cmd->add_option("--motion", motion, "static|pan|tilt|teleport");
  fixtures_cmd->add_option("--perturb", perturb_json,
                           "perturbation spec json (inline or @file)");

  auto* serve = app.add_subcommand("serve", "run the submission service");
  serve->add_option("--port", port, "listen port")
      ->envname("SEAEVAL_PORT");
  serve->add_option("--data-dir", data_dir, "service state directory")
      ->envname("SEAEVAL_DATA_DIR")
      ->required();
  serve->add_option("--quota", quota, "daily submission quota per user")
      ->envname("SEAEVAL_QUOTA");

  auto* validate = app.add_subcommand("validate", "dataset sanity check");
  validate->add_option("--gt", gt_path, "ground-truth json")->required();
  validate->add_option("--meta", meta_path, "frame metadata json");
  add_common(validate);

  CLI11_PARSE(app, argc, argv);

  try {
    if (jobs <= 0) {
      jobs = std::max(1u, std::thread::hardware_concurrency());
    }
    // Evaluator knobs overridable from a canonical-JSON config file.
    json config = json::object();
    if (!config_path.empty()) {
      config = json::parse(slurp(config_path), nullptr, false);
      if (config.is_discarded() || !config.is_object()) {
        throw InputError("config file is not a JSON object: " + config_path);
      }
    }
    EdgeMetricConfig edge_cfg;
    edge_cfg.theta_w = config.value("theta_w", edge_cfg.theta_w);
    SegDetectionConfig seg_cfg;
    seg_cfg.coverage_threshold =
        config.value("coverage_threshold", seg_cfg.coverage_threshold);
    seg_cfg.fp_connectivity =
        config.value("fp_connectivity", seg_cfg.fp_connectivity);
    seg_cfg.fp_min_area = config.value("fp_min_area", seg_cfg.fp_min_area);
    UsvDetConfig usv_cfg;
    usv_cfg.iou_threshold = config.value("usv_iou_threshold", usv_cfg.iou_threshold);
    usv_cfg.zone_membership =
        config.value("zone_membership", usv_cfg.zone_membership);
    MotConfig mot_cfg;
    mot_cfg.iou_min = config.value("mot_iou_min", mot_cfg.iou_min);
    mot_cfg.mt_threshold = config.value("mt_threshold", mot_cfg.mt_threshold);
    mot_cfg.ml_threshold = config.value("ml_threshold", mot_cfg.ml_threshold);
    OdConfig od_cfg;
    od_cfg.ignore_coverage = config.value("ignore_coverage", od_cfg.ignore_coverage);
    od_cfg.jobs = jobs;

    if (*eval_od) {
      const CocoGtFile gt = parse_coco_gt_json(slurp(gt_path));
      const CocoDetFile det =
          parse_coco_det_json(slurp(preds_path), gt.category_to_class());
      OdConfig cfg = od_cfg;
      cfg.binary = binary;
      const OdReport report =
          evaluate_od(det.records, gt.records, gt.frames(), gt.classes, cfg);
      emit(out_path, canonical_json(od_report_to_json(report)));
      if (!pr_csv_path.empty()) {
        spit(pr_csv_path, pr_curves_to_csv(
                              report, binary ? ClassTable::binary() : gt.classes));
      }
    } else if (*eval_mot) {
      std::vector<std::pair<TrackSet, TrackSet>> pairs;
      if (fs::is_directory(gt_path)) {
        for (const auto& entry : fs::directory_iterator(gt_path)) {
          if (entry.path().extension() != ".csv") continue;
          const std::string seq = entry.path().stem().string();
          const fs::path pred_file = fs::path(preds_path) / entry.path().filename();
          if (!fs::exists(pred_file)) {
            throw InputError("missing prediction file: " + pred_file.string());
          }
          pairs.push_back({parse_mot_csv(slurp(pred_file.string()), seq).tracks,
                           parse_mot_csv(slurp(entry.path().string()), seq).tracks});
        }
        std::sort(pairs.begin(), pairs.end(),
                  [](const auto& a, const auto& b) {
                    return a.second.sequence_id < b.second.sequence_id;
                  });
        if (pairs.empty()) throw InputError("no .csv sequences in " + gt_path);
      } else {
        pairs.push_back({parse_mot_csv(slurp(preds_path), "seq0").tracks,
                         parse_mot_csv(slurp(gt_path), "seq0").tracks});
      }
      const MotReport report = evaluate_mot_multi(pairs, mot_cfg);
      emit(out_path, canonical_json(mot_report_to_json(report)));
    } else if (*eval_seg) {
      const CocoGtFile gt = parse_coco_gt_json(slurp(gt_path));
      const WaterEdgeMap edge_map = read_edges_json(slurp(edges_path));
      const auto frames = gt.frames();
      const auto zones = load_zone_masks(zone_dir, zone_spec, frames);

      std::vector<EdgeFrameResult> edge_results(frames.size());
      std::vector<SegFrameResult> det_results(frames.size());
      std::vector<std::string> errors(frames.size());
      parallel_for(frames.size(), jobs, [&](std::size_t i) {
        try {
          const std::string frame = frames[i];
          const SegmentationRaster pred = read_mask_pgm(
              slurp((fs::path(pred_masks_dir) / (frame + ".pgm")).string()));
          auto eit = edge_map.find(frame);
          if (eit == edge_map.end()) {
            throw MissingEdgeForFrame("no edge for frame " + frame);
          }
          edge_results[i] = water_edge_metrics(pred, eit->second, edge_cfg);
          std::vector<BBox> boxes;
          for (const auto& g : gt.records)
            if (g.frame_id == frame && !g.ignore) boxes.push_back(g.bbox);
          SegmentationRaster zone;
          if (auto it = zones.find(frame); it != zones.end()) zone = it->second;
          det_results[i] =
              obstacle_detection_from_mask(pred, boxes, eit->second, zone, seg_cfg);
        } catch (const std::exception& e) {
          errors[i] = e.what();
        }
      });
      for (const auto& e : errors) {
        if (!e.empty()) throw InputError(e);
      }
      const SegReport report = seg_report(edge_results, det_results, macro);
      emit(out_path, canonical_json(seg_report_to_json(report)));
    } else if (*eval_usv) {
      const CocoGtFile gt = parse_coco_gt_json(slurp(gt_path));
      const CocoDetFile det =
          parse_coco_det_json(slurp(preds_path), gt.category_to_class());
      const WaterEdgeMap edge_map = read_edges_json(slurp(edges_path));
      const auto frames = gt.frames();
      const auto zones = load_zone_masks(zone_dir, zone_spec, frames);
      const UsvDetReport report =
          evaluate_usv_det(det.records, gt.records, frames, edge_map, zones,
                           gt.classes, usv_cfg);
      emit(out_path, canonical_json(usv_det_report_to_json(report)));
    } else if (*tide) {
      const CocoGtFile gt = parse_coco_gt_json(slurp(gt_path));
      const CocoDetFile det =
          parse_coco_det_json(slurp(preds_path), gt.category_to_class());
      const TideReport report =
          tide_decompose(det.records, gt.records, gt.frames(), gt.classes);
      emit(out_path, canonical_json(tide_report_to_json(report)));
    } else if (*stratify_cmd) {
      const CocoGtFile gt = parse_coco_gt_json(slurp(gt_path));
      const CocoDetFile det =
          parse_coco_det_json(slurp(preds_path), gt.category_to_class());
      const MetaFile meta = read_meta_sidecar(slurp(meta_path));

      StratumSpec spec;
      spec.key = key;
      if (!edges_opt.empty()) {
        spec.edges = edges_opt;
      } else if (range_max > range_min) {
        spec.edges = equidistant_edges(range_min, range_max, bins);
      } else {
        throw InputError("provide --edges or --min/--max/--bins");
      }
      const Partition partition =
          stratify(gt.frames(), meta.meta, spec);

      json strata = json::object();
      for (const auto& [label, frame_subset] : partition) {
        if (frame_subset.empty()) continue;
        std::set<std::string> keep(frame_subset.begin(), frame_subset.end());
        std::vector<GroundTruthRecord> g;
        std::vector<DetectionRecord> p;
        for (const auto& r : gt.records)
          if (keep.count(r.frame_id)) g.push_back(r);
        for (const auto& r : det.records)
          if (keep.count(r.frame_id)) p.push_back(r);
        strata[label] =
            od_report_to_json(evaluate_od(p, g, frame_subset, gt.classes, od_cfg));
      }
      json body = {{"format_version", kFormatVersion},
                   {"key", key},
                   {"edges", spec.edges},
                   {"strata", strata}};
      emit(out_path, canonical_json(body));
    } else if (*fixtures_cmd) {
      ScenarioSpec spec;
      spec.seed = static_cast<std::uint64_t>(seed);
      spec.frames = frames_n;
      spec.objects_per_class = objects;
      spec.motion = motion_from_string(motion);
      const ScenarioData data = generate_scenario(spec);
      if (!perturb_json.empty()) {
        std::string body = perturb_json;
        if (body.rfind('@', 0) == 0) body = slurp(body.substr(1));
        const json pj = json::parse(body);
        PerturbationSpec ps;
        ps.drop_rate = pj.value("drop_rate", 0.0);
        ps.duplicate_rate = pj.value("duplicate_rate", 0.0);
        ps.shift_sigma = pj.value("shift_sigma", 0.0);
        ps.class_flip_rate = pj.value("class_flip_rate", 0.0);
        ps.score_noise = pj.value("score_noise", 0.0);
        ps.seed = pj.value("seed", static_cast<std::uint64_t>(seed));
        std::size_t max_class = 0;
        for (const auto& g : data.gts)
          max_class = std::max(max_class, static_cast<std::size_t>(g.class_id) + 1);
        std::vector<std::string> names;
        for (std::size_t i = 0; i < std::max<std::size_t>(1, max_class); ++i)
          names.push_back("class" + std::to_string(i));
        const auto preds = perturb(data.gts, ps, ClassTable(names));
        const TrackSet pred_tracks = perturb_tracks(data.gt_tracks, ps);
        write_scenario_dir(data, fixtures_dir, &preds, &pred_tracks);
      } else {
        const auto preds = perturb(data.gts, {}, ClassTable::uav_mot());
        const TrackSet pred_tracks = perturb_tracks(data.gt_tracks, {});
        write_scenario_dir(data, fixtures_dir, &preds, &pred_tracks);
      }
    } else if (*serve) {
      ServiceConfig cfg;
      cfg.data_dir = data_dir;
      cfg.port = port;
      cfg.daily_quota = quota;
      EvalService service(cfg);
      service.start();
      std::cerr << "serving on 127.0.0.1:" << service.port() << "\n";
      for (;;) std::this_thread::sleep_for(std::chrono::seconds(3600));
    } else if (*validate) {
      const CocoGtFile gt = parse_coco_gt_json(slurp(gt_path));
      FrameMetaMap meta;
      std::vector<std::string> meta_warnings;
      if (!meta_path.empty()) {
        MetaFile mf = read_meta_sidecar(slurp(meta_path));
        meta = std::move(mf.meta);
        meta_warnings = std::move(mf.warnings);
      }
      const ValidationReport report = validate_dataset(gt.frames(), gt.records, meta);
      json violations = json::array();
      for (const auto& v : report.violations) {
        violations.push_back(
            {{"code", v.code}, {"frame", v.frame_id}, {"detail", v.detail}});
      }
      json body = {{"format_version", kFormatVersion},
                   {"ok", report.ok()},
                   {"violations", violations},
                   {"warnings", meta_warnings}};
      emit(out_path, canonical_json(body));
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
