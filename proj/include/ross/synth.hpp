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
 * \file synth.hpp
 * \brief Deterministic synthetic off-road scenes with known ground truth.
 *
 * A scene is a sloped ground plane clipped to a square, half-ellipsoid bush
 * domes and yawed obstacle boxes. LIDAR scans ray-cast a world-fixed grid of
 * column tops; radar frames draw class-conditional energies along each
 * azimuth with first-hit shadowing behind obstacles. Ground-truth label
 * images are evaluated analytically from the geometry.
 *
 * Random numbers come from std::mt19937_64 (fully specified by the C++
 * standard); uniform and normal variates are derived from its raw output
 * here rather than through the implementation-defined std distributions.
 */
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "ross/geometry.hpp"
#include "ross/projection.hpp"
#include "ross/taxonomy.hpp"
#include "ross/types.hpp"

namespace ross {

struct BushSpec {
  Vec2 center = Vec2::Zero();
  double radius = 2.0;
  double height = 1.0;
};

struct BoxSpec {
  Vec2 center = Vec2::Zero();
  double yaw = 0.0;
  double length = 2.0;  // along the box x axis
  double width = 2.0;
  double height = 2.0;
};

struct IntensityModel {
  enum class Kind { kGaussian, kUniform };
  Kind kind = Kind::kGaussian;
  double a = 0.0;  // mean, or lower bound
  double b = 0.0;  // std, or upper bound

  static IntensityModel gaussian(double mean, double stddev) {
    return {Kind::kGaussian, mean, stddev};
  }
  static IntensityModel uniform(double low, double high) {
    return {Kind::kUniform, low, high};
  }
};

struct SceneSpec {
  std::uint64_t seed = 1;
  double extent = 40.0;  // ground covers [-extent, extent]^2

  double ground_z0 = 0.0;
  double ground_slope_x = 0.0;
  double ground_slope_y = 0.0;

  std::vector<BushSpec> bushes;
  std::vector<BoxSpec> boxes;

  // Trajectory keyframes every period / 2 over n_scans periods.
  Vec2 start = {-10.0, 0.0};
  Vec2 velocity = {1.5, 0.0};  // m/s, world frame
  double start_yaw = 0.0;
  double yaw_rate = 0.0;  // rad/s
  int n_scans = 20;
  double scan_period = 0.5;
  double radar_time_offset = 0.25;  // radar frame k at scan k time + offset

  double lidar_height = 2.5;  // above ground at the keyframe position
  double lidar_range = 20.0;  // horizontal
  double lidar_spacing = 0.2;

  /// Radar pose in the LIDAR frame; the extrinsic is its inverse.
  RigidTransform radar_mount = RigidTransform::from_translation({0.5, 0.0, -1.7});
  int n_azimuth = 400;
  int n_range_bins = 160;
  double range_resolution = 0.25;

  /// Index 0 is the model for Void and radar shadow.
  std::array<IntensityModel, kNumMergedClasses> intensity = {
      IntensityModel::gaussian(1500.0, 500.0),
      IntensityModel::gaussian(17000.0, 3000.0),
      IntensityModel::gaussian(18500.0, 3000.0),
      IntensityModel::uniform(10000.0, 30000.0)};

  BevGeometry gt_geometry = BevGeometry::centered(160, 160, 0.5);
  ZBand gt_band{-2.0, 3.0};
  /// Pixels farther than lidar_range - margin from every scan stay Void.
  double coverage_margin = 0.75;

  /// RELLIS ids written into the label files.
  std::uint32_t ground_label = 3;     // grass
  std::uint32_t bush_label = 19;      // bush
  std::uint32_t obstacle_label = 4;   // tree

  /// \throws ConfigError on non-physical values or a tilted radar mount.
  void validate() const;
  RigidTransform extrinsic() const { return radar_mount.inverse(); }
};

/// Parses the `key = value` scene file. \throws ConfigError.
SceneSpec parse_scene_spec(std::string_view text);
SceneSpec load_scene_spec(const std::filesystem::path &path);

struct RayHit {
  double t = 0.0;
  Vec3 point = Vec3::Zero();
  MergedClass cls = MergedClass::kVoid;
};

/// Analytic scene geometry shared by the sampler and the ground truth.
class SceneGeometry {
 public:
  explicit SceneGeometry(const SceneSpec &spec);

  bool in_extent(double x, double y) const;
  double ground_z(double x, double y) const;
  /// Highest surface point over (x, y) and its class; nullopt off the ground.
  std::optional<RayHit> top_surface(double x, double y) const;
  /// First surface hit along origin + t * dir for t in (0, max_t].
  std::optional<RayHit> cast(const Vec3 &origin, const Vec3 &dir,
                             double max_t) const;
  /// Highest-priority class whose solid over (x, y) meets [z_lo, z_hi].
  MergedClass column_class(double x, double y, double z_lo, double z_hi) const;
  /**
   * Highest-priority class present anywhere in a square of half-size
   * `half` centered at `center` with unit axes `u`, `v`: bushes and boxes
   * whose footprint meets the square and whose solid meets [z_lo, z_hi],
   * else Ground when the ground under the center lies in the band.
   */
  MergedClass footprint_class(const Vec2 &center, const Vec2 &u, const Vec2 &v,
                              double half, double z_lo, double z_hi) const;

 private:
  SceneSpec spec_;
};

struct SynthScene {
  std::vector<LabeledCloud> scans;  // LIDAR frame, RELLIS labels
  Trajectory trajectory;            // LIDAR poses in the world
  std::vector<RadarFrame> radar_frames;
  std::vector<LabelImage> gt_labels;  // one per radar frame
  RigidTransform extrinsic;           // LIDAR -> RADAR
};

/// \throws ConfigError for an invalid spec.
SynthScene generate_scene(const SceneSpec &spec);

/**
 * Writes scans/, radar/, gt/, trajectory.txt, calibration.txt and a
 * pipeline.cfg pointing at them. Files are written atomically one by one.
 */
void write_scene(const SynthScene &scene, const SceneSpec &spec,
                 const std::filesystem::path &dir);

/// Portable variates on top of mt19937_64.
class SynthRng {
 public:
  explicit SynthRng(std::uint64_t seed) : engine_(seed) {}
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Box-Muller, caching the second variate.
  double normal();
  std::uint16_t draw(const IntensityModel &m);

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

}  // namespace ross
