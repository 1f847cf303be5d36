// Copyright 2026, The ROSS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// `ross` command line: one subcommand per pipeline stage.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ross/analysis.hpp"
#include "ross/calibration.hpp"
#include "ross/config.hpp"
#include "ross/errors.hpp"
#include "ross/io.hpp"
#include "ross/label_fusion.hpp"
#include "ross/metrics.hpp"
#include "ross/pipeline.hpp"
#include "ross/projection.hpp"
#include "ross/synth.hpp"

namespace fs = std::filesystem;
using namespace ross;

namespace {

// -- calibrate ----------------------------------------------------------------

struct CalibrateArgs {
  std::string pairs, out;
  PlanarFitOptions fit;
};

void add_calibrate(CLI::App &app, CalibrateArgs &a, int &status) {
  auto *cmd = app.add_subcommand("calibrate", "Fit the LIDAR to RADAR extrinsic");
  cmd->add_option("--pairs", a.pairs, "correspondences, `lx ly lz rx ry` per line")
      ->required();
  cmd->add_option("--fixed-z", a.fit.fixed_z, "z translation (m)");
  cmd->add_option("--fixed-roll", a.fit.fixed_roll, "roll (rad)");
  cmd->add_option("--fixed-pitch", a.fit.fixed_pitch, "pitch (rad)");
  cmd->add_option("--out", a.out, "calibration file to write (stdout if omitted)");
  cmd->callback([&] {
    const auto pairs = read_correspondences(a.pairs);
    const CalibrationResult r = estimate_extrinsics(pairs, a.fit);
    const io::CalibrationFile file{r.extrinsic, r.rms_residual};
    if (a.out.empty()) {
      std::cout << io::format_calibration(file);
    } else {
      io::write_calibration(file, a.out);
    }
    std::cerr << "rms_residual " << io::format_double(r.rms_residual) << " m over "
              << pairs.size() << " targets, " << r.iterations << " iterations\n";
    for (std::size_t i = 0; i < r.per_target_residuals.size(); ++i) {
      std::cerr << "  target " << i << ": "
                << io::format_double(r.per_target_residuals[i]) << " m\n";
    }
    status = 0;
  });
}

// -- fuse ---------------------------------------------------------------------

struct FuseArgs {
  std::string scans, traj, out, class_map;
  double voxel_size = 0.25;
  std::uint32_t min_points = 1;
  int jobs = 1;
};

void add_fuse(CLI::App &app, FuseArgs &a, int &status) {
  auto *cmd = app.add_subcommand("fuse", "Accumulate labelled scans into a voxel map");
  cmd->add_option("--scans", a.scans, "directory of .bin/.label scans")->required();
  cmd->add_option("--traj", a.traj, "LIDAR trajectory file")->required();
  cmd->add_option("--voxel-size", a.voxel_size, "voxel edge length (m)");
  cmd->add_option("--min-points", a.min_points, "drop voxels with fewer points");
  cmd->add_option("--class-map", a.class_map, "RELLIS-3D to merged class table");
  cmd->add_option("--jobs", a.jobs, "worker threads");
  cmd->add_option("--out", a.out, "map file to write")->required();
  cmd->callback([&] {
    if (a.jobs < 1) throw ConfigError("--jobs must be >= 1");
    const ClassMap map = a.class_map.empty() ? ClassMap::builtin() : ClassMap::load(a.class_map);
    const auto scans = read_scans(a.scans);
    const auto traj = io::read_trajectory(a.traj);
    VoxelLabelMap vmap =
        build_voxel_map(accumulate(scans, traj), map, a.voxel_size, Vec3::Zero(), a.jobs);
    vmap.prune(a.min_points);
    write_voxel_map(vmap, a.out);
    std::cerr << vmap.size() << " voxels from " << vmap.total_points() << " points\n";
    status = 0;
  });
}

// -- project ------------------------------------------------------------------

struct ProjectArgs {
  std::string map, radar, traj, calib, out, merge = "cls3";
  int channels = 1, rows = 512, cols = 512, jobs = 1;
  double mpp = 0.5;
  ZBand band;
};

void add_project(CLI::App &app, ProjectArgs &a, int &status) {
  auto *cmd = app.add_subcommand("project", "Render BEV inputs and label images");
  cmd->add_option("--map", a.map, "voxel map file")->required();
  cmd->add_option("--radar", a.radar, "directory of polar radar frames")->required();
  cmd->add_option("--traj", a.traj, "LIDAR trajectory file")->required();
  cmd->add_option("--calib", a.calib, "calibration file")->required();
  cmd->add_option("--channels", a.channels, "input channels, 1 or 3");
  cmd->add_option("--rows", a.rows, "BEV raster rows");
  cmd->add_option("--cols", a.cols, "BEV raster columns");
  cmd->add_option("--mpp", a.mpp, "BEV meters per pixel");
  cmd->add_option("--z-min", a.band.z_min, "lower z of the label band (m)");
  cmd->add_option("--z-max", a.band.z_max, "upper z of the label band (m)");
  cmd->add_option("--merge", a.merge, "merge mode recorded in the manifest");
  cmd->add_option("--jobs", a.jobs, "worker threads");
  cmd->add_option("--out", a.out, "output directory")->required();
  cmd->callback([&] {
    if (a.jobs < 1) throw ConfigError("--jobs must be >= 1");
    if (!(a.mpp > 0.0) || a.rows < 1 || a.cols < 1) {
      throw ConfigError("BEV raster must be non-empty with --mpp > 0");
    }
    if (!(a.band.z_min < a.band.z_max)) throw ConfigError("--z-min must be < --z-max");
    const MergeMode merge = parse_merge_mode(a.merge);
    const auto map = read_voxel_map(a.map);
    const auto frames = read_radar_frames(a.radar);
    const auto traj = io::read_trajectory(a.traj);
    const auto calib = io::read_calibration(a.calib);
    const BevGeometry geometry = BevGeometry::centered(a.rows, a.cols, a.mpp);
    StagedOutput out(a.out);
    const auto files = project_dataset(map, frames, traj, calib.extrinsic, geometry,
                                       a.band, a.channels, a.jobs, out.dir());
    const Manifest m = build_manifest(out.dir(), files, a.channels, merge,
                                      frames.size() - (a.channels - 1));
    io::write_text_atomic(out.dir() / "manifest.txt", m.to_string());
    out.commit();
    std::cerr << m.frames << " frames written to " << a.out << "\n";
    status = 0;
  });
}

// -- analyze ------------------------------------------------------------------

struct AnalyzeArgs {
  std::string pairs, classes, out;
  std::size_t bins = 256;
};

void add_analyze(CLI::App &app, AnalyzeArgs &a, int &status) {
  auto *cmd = app.add_subcommand("analyze", "Per-class radar intensity histograms");
  cmd->add_option("--pairs", a.pairs,
                  "directory of frame_*_c0.png / frame_*_label.png pairs")
      ->required();
  cmd->add_option("--classes", a.classes,
                  "comma-separated class sets, e.g. ground,bushes+obstacles")
      ->required();
  cmd->add_option("--bins", a.bins, "histogram bins over 0..65535");
  cmd->add_option("--out", a.out, "output directory")->required();
  cmd->callback([&] {
    std::vector<ClassSet> sets;
    std::stringstream ss(a.classes);
    for (std::string part; std::getline(ss, part, ',');) sets.push_back(parse_class_set(part));
    if (sets.empty()) throw ConfigError("--classes is empty");
    std::vector<ClassHistogram> hists;
    for (const auto &s : sets) hists.push_back(make_histogram(s, a.bins));
    const auto labels = list_files(a.pairs, "_label.png");
    if (labels.empty()) throw InsufficientDataError("no label images in " + a.pairs);
    for (const auto &lp : labels) {
      const std::string name = lp.filename().string();
      const fs::path bev_path =
          lp.parent_path() / (name.substr(0, name.size() - 10) + "_c0.png");
      const auto bev = io::read_bev_image(bev_path);
      const auto lab = io::read_label_image(lp);
      for (std::size_t i = 0; i < sets.size(); ++i) {
        hists[i].merge(intensity_histogram(bev, lab, sets[i], a.bins));
      }
    }
    std::string summary =
        "classes,count,mean,std,p10,p50,p90,fraction_10k_30k\n";
    std::vector<std::pair<std::string, std::string>> csvs;
    for (const auto &h : hists) {
      const std::string name = class_set_name(h.class_set);
      csvs.emplace_back("hist_" + name + ".csv", histogram_csv(h));
      const auto s = summarize(h);
      char buf[256];
      std::snprintf(buf, sizeof(buf), "%s,%llu,%.2f,%.2f,%.2f,%.2f,%.2f,%.4f\n",
                    name.c_str(), static_cast<unsigned long long>(s.count), s.mean,
                    s.stddev, s.p10, s.p50, s.p90, s.fraction_10k_30k);
      summary += buf;
    }
    if (hists.size() == 2) {
      if (hists[0].total() > 0 && hists[1].total() > 0) {
        const auto t = best_threshold(hists[0], hists[1]);
        summary += "# best_threshold " + std::to_string(t.threshold) +
                   " balanced_accuracy " + io::format_double(t.balanced_accuracy) + "\n";
      } else {
        summary += "# best_threshold undefined (empty class set)\n";
      }
    }
    fs::create_directories(a.out);
    for (const auto &[file, text] : csvs) io::write_text_atomic(fs::path(a.out) / file, text);
    io::write_text_atomic(fs::path(a.out) / "summary.csv", summary);
    std::cout << summary;
    status = 0;
  });
}

// -- cfar ---------------------------------------------------------------------

struct CfarArgs {
  std::string frame, out;
  CfarParams params;
};

void add_cfar(CLI::App &app, CfarArgs &a, int &status) {
  auto *cmd = app.add_subcommand("cfar", "CA-CFAR detections per azimuth row");
  cmd->add_option("--frame", a.frame, "polar radar frame PNG")->required();
  cmd->add_option("--guard", a.params.guard, "guard cells per side");
  cmd->add_option("--train", a.params.train, "training cells per side");
  cmd->add_option("--scale", a.params.scale, "threshold multiple of the local mean");
  cmd->add_option("--out", a.out, "CSV file to write (stdout if omitted)");
  cmd->callback([&] {
    const auto frame = io::read_radar_frame(a.frame);
    std::string csv = "azimuth,bin,x,y,value\n";
    for (const auto &d : cfar_frame(frame, a.params)) {
      const double r = d.range_bin * frame.range_resolution;
      const double th = frame.azimuth_of(d.azimuth);
      csv += std::to_string(d.azimuth) + "," + std::to_string(d.range_bin) + "," +
             io::format_double(r * std::cos(th)) + "," +
             io::format_double(r * std::sin(th)) + "," + std::to_string(d.value) + "\n";
    }
    if (a.out.empty()) {
      std::cout << csv;
    } else {
      io::write_text_atomic(a.out, csv);
    }
    status = 0;
  });
}

// -- eval ---------------------------------------------------------------------

struct EvalArgs {
  std::string pred, gt, merge = "cls3", out;
  bool allow_void = false;
  int jobs = 1;
};

void add_eval(CLI::App &app, EvalArgs &a, int &status) {
  auto *cmd = app.add_subcommand("eval", "IoU / accuracy of predicted label images");
  cmd->add_option("--pred", a.pred, "directory of predicted *_label.png")->required();
  cmd->add_option("--gt", a.gt, "directory of ground-truth *_label.png")->required();
  cmd->add_option("--merge", a.merge, "cls3, cls2-1 or cls2-2");
  cmd->add_flag("--allow-void", a.allow_void,
                "count Void predictions as rejected instead of failing");
  cmd->add_option("--jobs", a.jobs, "worker threads");
  cmd->add_option("--out", a.out, "directory for report.txt and confusion.csv");
  cmd->callback([&] {
    if (a.jobs < 1) throw ConfigError("--jobs must be >= 1");
    ConfusionOptions opts;
    opts.allow_void_prediction = a.allow_void;
    const auto ev = evaluate_dirs(a.pred, a.gt, parse_merge_mode(a.merge), a.jobs, opts);
    const std::string text = ev.report.to_text();
    std::cout << text << "\n" << ev.confusion.to_csv();
    if (!a.out.empty()) {
      fs::create_directories(a.out);
      io::write_text_atomic(fs::path(a.out) / "report.txt", text);
      io::write_text_atomic(fs::path(a.out) / "confusion.csv", ev.confusion.to_csv());
    }
    status = 0;
  });
}

// -- synth --------------------------------------------------------------------

struct SynthArgs {
  std::string spec, out;
};

void add_synth(CLI::App &app, SynthArgs &a, int &status) {
  auto *cmd = app.add_subcommand("synth", "Generate a synthetic scene");
  cmd->add_option("--spec", a.spec, "scene spec file")->required();
  cmd->add_option("--out", a.out, "output directory")->required();
  cmd->callback([&] {
    const SceneSpec spec = load_scene_spec(a.spec);
    const SynthScene scene = generate_scene(spec);
    StagedOutput out(a.out);
    write_scene(scene, spec, out.dir());
    out.commit();
    std::cerr << scene.scans.size() << " scans, " << scene.radar_frames.size()
              << " radar frames written to " << a.out << "\n";
    status = 0;
  });
}

// -- convert ------------------------------------------------------------------

struct ConvertArgs {
  std::vector<std::string> paths;
  std::string type = "auto";
  bool check = false;
};

void check_file(const fs::path &p, std::string type) {
  const std::string name = p.filename().string();
  if (type == "auto") {
    if (name == "manifest.txt") {
      type = "manifest";
    } else if (name.ends_with("_label.png")) {
      type = "label";
    } else if (name.ends_with(".png")) {
      type = io::read_sidecar(p).count("range_resolution") ? "radar" : "bev";
    } else if (name.ends_with(".bin")) {
      type = fs::exists(io::label_path_for(p)) ? "cloud" : "map";
    } else if (name == "trajectory.txt") {
      type = "trajectory";
    } else if (name == "calibration.txt") {
      type = "calibration";
    } else {
      throw ConfigError("cannot infer the format of " + p.string() + "; pass --type");
    }
  }
  if (type == "cloud") {
    io::read_cloud(p);
  } else if (type == "map") {
    read_voxel_map(p);
  } else if (type == "radar") {
    io::read_radar_frame(p);
  } else if (type == "label") {
    io::read_label_image(p);
  } else if (type == "bev") {
    io::read_bev_image(p);
  } else if (type == "trajectory") {
    io::read_trajectory(p);
  } else if (type == "calibration") {
    io::read_calibration(p);
  } else if (type == "manifest") {
    verify_manifest(p);
  } else {
    throw ConfigError("unknown --type " + type);
  }
}

bool checkable(const fs::path &p) {
  const std::string name = p.filename().string();
  return name.ends_with(".png") || name.ends_with(".bin") || name == "manifest.txt" ||
         name == "trajectory.txt" || name == "calibration.txt";
}

void add_convert(CLI::App &app, ConvertArgs &a, int &status) {
  auto *cmd = app.add_subcommand("convert", "Validate files against the on-disk formats");
  cmd->add_flag("--check", a.check, "validate only (the sole mode)")->required();
  cmd->add_option("--type", a.type,
                  "auto, cloud, map, radar, label, bev, trajectory, calibration or "
                  "manifest");
  cmd->add_option("paths", a.paths, "files or directories to check")->required();
  cmd->callback([&] {
    std::size_t n = 0;
    for (const auto &arg : a.paths) {
      const fs::path p(arg);
      if (!fs::exists(p)) throw ConfigError("no such path: " + arg);
      std::vector<fs::path> files;
      if (fs::is_directory(p)) {
        for (const auto &e : fs::recursive_directory_iterator(p)) {
          if (e.is_regular_file() && checkable(e.path())) files.push_back(e.path());
        }
        std::sort(files.begin(), files.end());
      } else {
        files.push_back(p);
      }
      for (const auto &f : files) {
        try {
          check_file(f, a.type);
        } catch (...) {
          rethrow_with_context(f.string() + ": ");
        }
        ++n;
      }
    }
    std::cout << n << " files ok\n";
    status = 0;
  });
}

// -- pipeline -----------------------------------------------------------------

struct PipelineArgs {
  std::string config;
  std::map<std::string, std::string> values;  // flag -> value
};

void add_pipeline(CLI::App &app, PipelineArgs &a, int &status) {
  auto *cmd = app.add_subcommand(
      "pipeline", "fuse -> project -> eval from one config; flags override the file");
  cmd->add_option("--config", a.config, "config file ([section] key = value)");
  for (const auto &key : pipeline_config_keys()) {
    const std::string flag(key.flag);
    cmd->add_option("--" + flag, a.values[flag],
                    std::string(key.help) + "  [" + std::string(key.section) + "] " +
                        std::string(key.key));
  }
  cmd->callback([cmd, &a, &status] {
    KeyValueConfig cfg;
    fs::path base = fs::current_path();
    if (!a.config.empty()) {
      cfg = KeyValueConfig::load(a.config);
      base = fs::absolute(a.config).parent_path();
    }
    // Rebase file paths so flags (relative to the cwd) can mix with them.
    PipelineConfig file_config = PipelineConfig::from(cfg, base);
    const auto set_path = [&](std::string_view key, const fs::path &p) {
      if (!p.empty()) cfg.set("paths", key, p.string());
    };
    set_path("scans", file_config.scans);
    set_path("trajectory", file_config.trajectory);
    set_path("radar", file_config.radar);
    set_path("calibration", file_config.calibration);
    set_path("output", file_config.output);
    set_path("gt", file_config.gt);
    set_path("class_map", file_config.class_map);
    for (const auto &key : pipeline_config_keys()) {
      const std::string flag(key.flag);
      if (cmd->count("--" + flag) == 0) continue;
      std::string value = a.values[flag];
      if (key.is_path) value = fs::absolute(value).string();
      cfg.set(key.section, key.key, value);
    }
    const PipelineConfig config = PipelineConfig::from(cfg, fs::current_path());
    const PipelineResult r = run_pipeline(config);
    std::cerr << r.frames << " frames, " << r.manifest.files.size()
              << " files written to " << config.output.string() << "\n";
    if (r.evaluation) std::cout << r.evaluation->report.to_text();
    status = 0;
  });
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"ross: radar semantic labels from LIDAR", "ross"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "help for every subcommand");
  int status = 1;

  CalibrateArgs calibrate;
  FuseArgs fuse;
  ProjectArgs project;
  AnalyzeArgs analyze;
  CfarArgs cfar;
  EvalArgs eval;
  SynthArgs synth;
  ConvertArgs convert;
  PipelineArgs pipeline;
  add_calibrate(app, calibrate, status);
  add_fuse(app, fuse, status);
  add_project(app, project, status);
  add_analyze(app, analyze, status);
  add_cfar(app, cfar, status);
  add_eval(app, eval, status);
  add_synth(app, synth, status);
  add_convert(app, convert, status);
  add_pipeline(app, pipeline, status);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return exit_codes::kUsage;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e);
  }
  return status;
}
