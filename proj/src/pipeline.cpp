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

#include "ross/pipeline.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "ross/errors.hpp"
#include "ross/io.hpp"
#include "ross/parallel.hpp"

namespace ross {
namespace {

constexpr ConfigKey kKeys[] = {
    {"paths", "scans", "scans", "directory of .bin/.label LIDAR scans", true},
    {"paths", "trajectory", "trajectory", "LIDAR pose trajectory file", true},
    {"paths", "radar", "radar", "directory of polar radar PNG frames", true},
    {"paths", "calibration", "calibration", "LIDAR to RADAR calibration file", true},
    {"paths", "output", "output", "output directory", true},
    {"paths", "gt", "gt", "ground-truth label directory to evaluate against", true},
    {"paths", "class_map", "class-map", "RELLIS-3D to merged class table", true},
    {"fusion", "voxel_size", "voxel-size", "voxel edge length in meters", false},
    {"fusion", "min_points", "min-points", "drop voxels with fewer points", false},
    {"bev", "rows", "rows", "BEV raster rows", false},
    {"bev", "cols", "cols", "BEV raster columns", false},
    {"bev", "mpp", "mpp", "BEV meters per pixel", false},
    {"projection", "z_min", "z-min", "lower z of the label band (radar frame)", false},
    {"projection", "z_max", "z-max", "upper z of the label band (radar frame)", false},
    {"projection", "channels", "channels", "input channels, 1 or 3", false},
    {"eval", "merge", "merge", "class merge mode: cls3, cls2-1 or cls2-2", false},
    {"run", "jobs", "jobs", "worker threads", false},
};

const KeyValueConfig::Section *section_of(const KeyValueConfig &cfg,
                                          std::string_view name) {
  return cfg.find(name);
}

void require_exists(const fs::path &p, const char *what, bool directory) {
  if (p.empty()) throw ConfigError(std::string("missing path: ") + what);
  if (!fs::exists(p)) {
    throw ConfigError(std::string(what) + " not found: " + p.string());
  }
  if (directory != fs::is_directory(p)) {
    throw ConfigError(std::string(what) + (directory ? " is not a directory: "
                                                     : " is not a file: ") +
                      p.string());
  }
}

template <class Fn>
auto stage(const char *name, Fn &&fn) {
  try {
    return fn();
  } catch (...) {
    rethrow_with_context(std::string(name) + ": ");
  }
}

}  // namespace

std::span<const ConfigKey> pipeline_config_keys() { return kKeys; }

PipelineConfig PipelineConfig::from(const KeyValueConfig &cfg, const fs::path &base) {
  for (const auto &s : cfg.sections()) {
    for (const auto &[k, v] : s.values) {
      const bool known = std::any_of(std::begin(kKeys), std::end(kKeys), [&](const auto &key) {
        return key.section == s.name && key.key == k;
      });
      if (!known) throw ConfigError("unknown config key [" + s.name + "] " + k);
    }
  }
  PipelineConfig c;
  const auto *paths = section_of(cfg, "paths");
  const auto path = [&](const std::string &key) -> fs::path {
    const std::string v = get_string_or(paths, key, "");
    if (v.empty()) return {};
    const fs::path p(v);
    return p.is_absolute() ? p : base / p;
  };
  c.scans = path("scans");
  c.trajectory = path("trajectory");
  c.radar = path("radar");
  c.calibration = path("calibration");
  c.output = path("output");
  c.gt = path("gt");
  c.class_map = path("class_map");

  const auto *fusion = section_of(cfg, "fusion");
  c.voxel_size = get_double_or(fusion, "voxel_size", c.voxel_size);
  const long long min_points = get_int_or(fusion, "min_points", c.min_points);
  if (min_points < 1 || min_points > 0xffffffffll) {
    throw ConfigError("[fusion] min_points must be >= 1");
  }
  c.min_points = static_cast<std::uint32_t>(min_points);

  const auto *bev = section_of(cfg, "bev");
  const long long rows = get_int_or(bev, "rows", c.geometry.rows);
  const long long cols = get_int_or(bev, "cols", c.geometry.cols);
  if (rows < 1 || cols < 1 || rows > 65536 || cols > 65536) {
    throw ConfigError("[bev] rows and cols must be in [1, 65536]");
  }
  c.geometry = BevGeometry::centered(static_cast<int>(rows), static_cast<int>(cols),
                                     get_double_or(bev, "mpp", c.geometry.meters_per_pixel));

  const auto *proj = section_of(cfg, "projection");
  c.band.z_min = get_double_or(proj, "z_min", c.band.z_min);
  c.band.z_max = get_double_or(proj, "z_max", c.band.z_max);
  c.channels = static_cast<int>(get_int_or(proj, "channels", c.channels));

  c.merge = parse_merge_mode(get_string_or(section_of(cfg, "eval"), "merge", "cls3"));
  c.jobs = static_cast<int>(get_int_or(section_of(cfg, "run"), "jobs", c.jobs));
  return c;
}

void PipelineConfig::validate() const {
  require_exists(scans, "scans", true);
  require_exists(trajectory, "trajectory", false);
  require_exists(radar, "radar", true);
  require_exists(calibration, "calibration", false);
  if (output.empty()) throw ConfigError("missing path: output");
  if (!gt.empty()) require_exists(gt, "gt", true);
  if (!class_map.empty()) require_exists(class_map, "class_map", false);
  if (!(voxel_size > 0.0)) throw ConfigError("voxel_size must be > 0");
  if (!(geometry.meters_per_pixel > 0.0)) throw ConfigError("mpp must be > 0");
  if (!(band.z_min < band.z_max)) throw ConfigError("z_min must be < z_max");
  if (channels != 1 && channels != 3) throw ConfigError("channels must be 1 or 3");
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
}

std::vector<fs::path> list_files(const fs::path &dir, std::string_view suffix) {
  if (!fs::is_directory(dir)) {
    throw ConfigError("not a directory: " + dir.string());
  }
  std::vector<fs::path> out;
  for (const auto &entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (name.size() >= suffix.size() &&
        name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0) {
      out.push_back(entry.path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<LabeledCloud> read_scans(const fs::path &dir) {
  std::vector<LabeledCloud> scans;
  for (const auto &p : list_files(dir, ".bin")) scans.push_back(io::read_cloud(p));
  if (scans.empty()) throw InsufficientDataError("no .bin scans in " + dir.string());
  return scans;
}

std::vector<RadarFrame> read_radar_frames(const fs::path &dir) {
  std::vector<RadarFrame> frames;
  for (const auto &p : list_files(dir, ".png")) frames.push_back(io::read_radar_frame(p));
  if (frames.empty()) throw InsufficientDataError("no radar frames in " + dir.string());
  for (std::size_t i = 1; i < frames.size(); ++i) {
    if (!(frames[i].timestamp > frames[i - 1].timestamp)) {
      throw FormatError("radar frame timestamps are not increasing at frame " +
                        std::to_string(i));
    }
  }
  return frames;
}

std::string frame_file_name(std::size_t index, std::string_view suffix) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "frame_%06zu", index);
  return std::string(buf) + std::string(suffix);
}

std::vector<std::string> project_dataset(const VoxelLabelMap &map,
                                         std::span<const RadarFrame> frames,
                                         std::span<const StampedPose> lidar_traj,
                                         const RigidTransform &extrinsic,
                                         const BevGeometry &geometry,
                                         const ZBand &band, int channels,
                                         int jobs, const fs::path &dir) {
  if (channels != 1 && channels != 3) throw ConfigError("channels must be 1 or 3");
  if (frames.size() < static_cast<std::size_t>(channels)) {
    throw InsufficientDataError(std::to_string(channels) + " channels need at least " +
                                std::to_string(channels) + " radar frames, got " +
                                std::to_string(frames.size()));
  }
  const std::size_t first = static_cast<std::size_t>(channels - 1);
  const std::size_t n = frames.size() - first;
  parallel_chunks(n, jobs, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const std::size_t k = first + i;
      const StackedInput input =
          stack_frames(frames.subspan(0, k + 1), lidar_traj, channels, geometry, extrinsic);
      for (int c = 0; c < channels; ++c) {
        io::write_bev_image(input.channels[c],
                            dir / frame_file_name(k, "_c" + std::to_string(c) + ".png"));
      }
      const RigidTransform lidar_pose = interpolate_pose(lidar_traj, frames[k].timestamp);
      LabelImage label =
          render_label_image(map, lidar_pose, extrinsic, geometry, band, 1);
      label.timestamp = frames[k].timestamp;
      io::write_label_image(label, dir / frame_file_name(k, "_label.png"));
    }
  });
  std::vector<std::string> names;
  const auto add = [&](const std::string &png) {
    names.push_back(png);
    names.push_back(io::sidecar_path(png).string());
  };
  for (std::size_t k = first; k < frames.size(); ++k) {
    for (int c = 0; c < channels; ++c) {
      add(frame_file_name(k, "_c" + std::to_string(c) + ".png"));
    }
    add(frame_file_name(k, "_label.png"));
  }
  std::sort(names.begin(), names.end());
  return names;
}

DirEvaluation evaluate_dirs(const fs::path &pred_dir, const fs::path &gt_dir,
                            MergeMode merge, int jobs, const ConfusionOptions &opts) {
  const auto preds = list_files(pred_dir, "_label.png");
  if (preds.empty()) {
    throw EmptyEvaluationError("no *_label.png predictions in " + pred_dir.string());
  }
  if (!fs::is_directory(gt_dir)) throw ConfigError("not a directory: " + gt_dir.string());
  std::vector<LabelImage> pred_images(preds.size()), gt_images(preds.size());
  parallel_chunks(preds.size(), jobs, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const fs::path gt_path = gt_dir / preds[i].filename();
      if (!fs::exists(gt_path)) {
        throw FormatError("no ground truth for " + preds[i].filename().string());
      }
      pred_images[i] = io::read_label_image(preds[i]);
      gt_images[i] = io::read_label_image(gt_path);
    }
  });
  DirEvaluation out;
  out.n_pairs = preds.size();
  out.confusion = accumulate_confusion(pred_images, gt_images,
                                       ClassGrouping::for_mode(merge), jobs, opts);
  out.report = iou_report(out.confusion);
  return out;
}

std::string sha256_hex(std::span<const std::uint8_t> bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 15];
  }
  return out;
}

std::string Manifest::to_string() const {
  std::string out = "# ross dataset manifest\n";
  out += "channels = " + std::to_string(channels) + "\n";
  out += "merge = " + std::string(merge_mode_name(merge)) + "\n";
  out += "frames = " + std::to_string(frames) + "\n";
  for (const auto &[hash, path] : files) out += "file " + hash + " " + path + "\n";
  return out;
}

Manifest Manifest::parse(std::string_view text) {
  Manifest m;
  bool have_channels = false, have_merge = false, have_frames = false;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  const auto fail = [&](const std::string &what) {
    throw FormatError("manifest line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (line.starts_with("file ")) {
      std::istringstream ls(line.substr(5));
      std::string hash, path, extra;
      if (!(ls >> hash >> path) || (ls >> extra)) fail("expected `file <sha256> <path>`");
      if (hash.size() != 64 ||
          hash.find_first_not_of("0123456789abcdef") != std::string::npos) {
        fail("bad sha256 '" + hash + "'");
      }
      if (fs::path(path).is_absolute() || path.find("..") != std::string::npos) {
        fail("path must be relative: " + path);
      }
      if (!m.files.empty() && !(m.files.back().second < path)) {
        fail("file entries must be sorted and unique");
      }
      m.files.emplace_back(hash, path);
      continue;
    }
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) fail("unrecognized line");
    const std::string key = line.substr(0, eq), value = line.substr(eq + 3);
    if (key == "channels" && !have_channels) {
      const auto v = io::parse_int(value);
      if (!v || (*v != 1 && *v != 3)) fail("channels must be 1 or 3");
      m.channels = static_cast<int>(*v);
      have_channels = true;
    } else if (key == "merge" && !have_merge) {
      try {
        m.merge = parse_merge_mode(value);
      } catch (const ConfigError &e) {
        fail(e.what());
      }
      have_merge = true;
    } else if (key == "frames" && !have_frames) {
      const auto v = io::parse_int(value);
      if (!v || *v < 0) fail("frames must be a non-negative integer");
      m.frames = static_cast<std::size_t>(*v);
      have_frames = true;
    } else {
      fail("unexpected or duplicate key '" + key + "'");
    }
  }
  if (!have_channels || !have_merge || !have_frames) {
    throw FormatError("manifest lacks channels, merge or frames");
  }
  return m;
}

Manifest build_manifest(const fs::path &dir, std::vector<std::string> files,
                        int channels, MergeMode merge, std::size_t frames) {
  std::sort(files.begin(), files.end());
  files.erase(std::unique(files.begin(), files.end()), files.end());
  Manifest m;
  m.channels = channels;
  m.merge = merge;
  m.frames = frames;
  for (const auto &f : files) {
    m.files.emplace_back(sha256_hex(io::read_file(dir / f)), f);
  }
  return m;
}

void verify_manifest(const fs::path &manifest_path) {
  const auto bytes = io::read_file(manifest_path);
  const Manifest m = Manifest::parse(
      std::string_view(reinterpret_cast<const char *>(bytes.data()), bytes.size()));
  const fs::path dir = manifest_path.parent_path();
  for (const auto &[hash, rel] : m.files) {
    const fs::path p = dir / rel;
    if (!fs::exists(p)) throw FormatError("manifest lists missing file " + rel);
    if (sha256_hex(io::read_file(p)) != hash) {
      throw FormatError("hash mismatch for " + rel);
    }
  }
}

StagedOutput::StagedOutput(const fs::path &out)
    : out_(out), staging_(out / "incomplete") {
  fs::create_directories(out_);
  fs::remove_all(staging_);
  fs::create_directories(staging_);
}

void StagedOutput::commit() {
  std::vector<fs::path> entries;
  for (const auto &e : fs::directory_iterator(staging_)) entries.push_back(e.path());
  std::sort(entries.begin(), entries.end());
  // The manifest moves last so a reader never sees it before its files.
  std::stable_partition(entries.begin(), entries.end(),
                        [](const fs::path &p) { return p.filename() != "manifest.txt"; });
  for (const auto &p : entries) {
    const fs::path dst = out_ / p.filename();
    if (fs::is_directory(dst)) fs::remove_all(dst);
    fs::rename(p, dst);
  }
  fs::remove(staging_);
}

PipelineResult run_pipeline(const PipelineConfig &config) {
  stage("config", [&] {
    config.validate();
    return 0;
  });

  const ClassMap class_map = stage("fuse", [&] {
    return config.class_map.empty() ? ClassMap::builtin() : ClassMap::load(config.class_map);
  });
  const Trajectory traj =
      stage("fuse", [&] { return io::read_trajectory(config.trajectory); });
  const RigidTransform extrinsic = stage(
      "project", [&] { return io::read_calibration(config.calibration).extrinsic; });
  const std::vector<RadarFrame> frames =
      stage("project", [&] { return read_radar_frames(config.radar); });
  if (frames.size() < static_cast<std::size_t>(config.channels)) {
    stage("project", [&]() -> int {
      throw InsufficientDataError(std::to_string(config.channels) +
                                  " channels need at least " +
                                  std::to_string(config.channels) +
                                  " radar frames, got " + std::to_string(frames.size()));
    });
  }

  StagedOutput out(config.output);
  std::vector<std::string> files;

  const VoxelLabelMap map = stage("fuse", [&] {
    const auto scans = read_scans(config.scans);
    const LabeledCloud world = accumulate(scans, traj);
    VoxelLabelMap m = build_voxel_map(world, class_map, config.voxel_size,
                                      Vec3::Zero(), config.jobs);
    m.prune(config.min_points);
    write_voxel_map(m, out.dir() / "map.bin");
    return m;
  });
  files.push_back("map.bin");

  const auto projected = stage("project", [&] {
    return project_dataset(map, frames, traj, extrinsic, config.geometry, config.band,
                           config.channels, config.jobs, out.dir());
  });
  files.insert(files.end(), projected.begin(), projected.end());

  PipelineResult result;
  result.frames = frames.size() - static_cast<std::size_t>(config.channels - 1);
  if (!config.gt.empty()) {
    result.evaluation = stage("eval", [&] {
      ConfusionOptions opts;
      opts.allow_void_prediction = true;
      DirEvaluation ev = evaluate_dirs(out.dir(), config.gt, config.merge, config.jobs, opts);
      io::write_text_atomic(out.dir() / "report.txt", ev.report.to_text());
      io::write_text_atomic(out.dir() / "confusion.csv", ev.confusion.to_csv());
      return ev;
    });
    files.push_back("report.txt");
    files.push_back("confusion.csv");
  }

  result.manifest = stage("manifest", [&] {
    Manifest m = build_manifest(out.dir(), files, config.channels, config.merge,
                                result.frames);
    io::write_text_atomic(out.dir() / "manifest.txt", m.to_string());
    return m;
  });
  stage("commit", [&] {
    out.commit();
    return 0;
  });
  return result;
}

}  // namespace ross
