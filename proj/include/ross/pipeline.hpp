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

/**
 * \file pipeline.hpp
 * \brief Dataset-level orchestration: fuse, project and evaluate whole
 *        recordings, staged output directories and content manifests.
 */
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ross/config.hpp"
#include "ross/label_fusion.hpp"
#include "ross/metrics.hpp"
#include "ross/projection.hpp"
#include "ross/types.hpp"

namespace ross {

namespace fs = std::filesystem;

/// One pipeline setting: config file `[section] key` and flag `--flag`.
struct ConfigKey {
  std::string_view section;
  std::string_view key;
  std::string_view flag;
  std::string_view help;
  bool is_path = false;
};

/// Every setting accepted by `ross pipeline`, in --help order.
std::span<const ConfigKey> pipeline_config_keys();

struct PipelineConfig {
  fs::path scans;        // directory of <stem>.bin / <stem>.label
  fs::path trajectory;   // LIDAR poses
  fs::path radar;        // directory of polar PNG frames
  fs::path calibration;  // LIDAR -> RADAR extrinsic
  fs::path output;
  fs::path gt;         // optional label images to evaluate against
  fs::path class_map;  // optional; shipped RELLIS table otherwise

  double voxel_size = 0.25;
  std::uint32_t min_points = 1;
  BevGeometry geometry;
  ZBand band;
  int channels = 1;
  MergeMode merge = MergeMode::kCls3;
  int jobs = 1;

  /// Reads the settings from `cfg`; relative paths resolve against `base`.
  /// \throws ConfigError for unknown keys or bad values.
  static PipelineConfig from(const KeyValueConfig &cfg, const fs::path &base);
  /// \throws ConfigError when a required path is unset or missing.
  void validate() const;
};

/// Regular files in `dir` whose names end in `suffix`, sorted by name.
std::vector<fs::path> list_files(const fs::path &dir, std::string_view suffix);

std::vector<LabeledCloud> read_scans(const fs::path &dir);
std::vector<RadarFrame> read_radar_frames(const fs::path &dir);

std::string frame_file_name(std::size_t index, std::string_view suffix);

/**
 * \brief Renders BEV inputs and label images for every frame with enough
 *        history into `dir`.
 *
 * Frame k is emitted as frame_%06d_c<i>.png (i < channels) plus
 * frame_%06d_label.png when k >= channels - 1. Frames are independent and
 * processed in parallel; file contents do not depend on `jobs`.
 * \returns the written file names relative to `dir`, sorted.
 * \throws InsufficientDataError when there are fewer frames than channels.
 */
std::vector<std::string> project_dataset(const VoxelLabelMap &map,
                                         std::span<const RadarFrame> frames,
                                         std::span<const StampedPose> lidar_traj,
                                         const RigidTransform &extrinsic,
                                         const BevGeometry &geometry,
                                         const ZBand &band, int channels,
                                         int jobs, const fs::path &dir);

struct DirEvaluation {
  ConfusionMatrix confusion;
  MetricReport report;
  std::size_t n_pairs = 0;
};

/**
 * Pairs every *_label.png in `pred_dir` with the same name in `gt_dir`.
 * \throws FormatError for a missing ground truth; EmptyEvaluationError when
 *         there is nothing to evaluate.
 */
DirEvaluation evaluate_dirs(const fs::path &pred_dir, const fs::path &gt_dir,
                            MergeMode merge, int jobs,
                            const ConfusionOptions &opts = {});

std::string sha256_hex(std::span<const std::uint8_t> bytes);

struct Manifest {
  int channels = 1;
  MergeMode merge = MergeMode::kCls3;
  std::size_t frames = 0;
  /// (sha256, path relative to the manifest directory), sorted by path.
  std::vector<std::pair<std::string, std::string>> files;

  std::string to_string() const;
  static Manifest parse(std::string_view text);
};

/// Hashes `files` (relative to `dir`) into a manifest.
Manifest build_manifest(const fs::path &dir, std::vector<std::string> files,
                        int channels, MergeMode merge, std::size_t frames);
/// \throws FormatError on a missing file or hash mismatch.
void verify_manifest(const fs::path &manifest_path);

/**
 * \brief Output directory whose files appear only on commit().
 *
 * Files are written under <out>/incomplete/. commit() renames each into
 * <out>/ and removes the staging directory; without it the partial files
 * stay quarantined in incomplete/.
 */
class StagedOutput {
 public:
  explicit StagedOutput(const fs::path &out);
  const fs::path &dir() const { return staging_; }
  void commit();

 private:
  fs::path out_;
  fs::path staging_;
};

struct PipelineResult {
  std::size_t frames = 0;
  std::optional<DirEvaluation> evaluation;
  Manifest manifest;
};

/**
 * fuse -> project -> (optional) evaluate. Errors carry the failing stage in
 * their message and keep their category.
 */
PipelineResult run_pipeline(const PipelineConfig &config);

}  // namespace ross
