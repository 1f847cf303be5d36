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
 * \file projection.hpp
 * \brief Polar to BEV scan conversion, label rendering from the voxel map,
 *        and multi-frame input stacking.
 *
 * All sampling is nearest-neighbour so that neither energies nor classes are
 * blended.
 */
#pragma once

#include <span>
#include <vector>

#include "ross/geometry.hpp"
#include "ross/label_fusion.hpp"
#include "ross/types.hpp"

namespace ross {

struct ZBand {
  double z_min = -1.0;
  double z_max = 3.0;
};

/**
 * \brief Nearest-bin Cartesian rendering of a polar frame.
 *
 * Pixels farther than n_range_bins * range_resolution are 0. The pixel at
 * the sensor origin takes range bin 0 of azimuth row 0.
 * \throws ConfigError for mpp <= 0 or an empty raster.
 */
BevImage polar_to_bev(const RadarFrame &frame, const BevGeometry &geometry);

/// Energy sampled at a radar-frame point by the same nearest-bin rule.
std::uint16_t sample_polar(const RadarFrame &frame, double x, double y);

/**
 * \brief Splats voxel centers into a label raster.
 *
 * `lidar_pose_world` is the LIDAR pose at the radar timestamp and
 * `extrinsic` maps LIDAR to RADAR coordinates, so a world point w lands at
 * extrinsic * lidar_pose_world^-1 * w. Voxels whose radar-frame center has
 * z in [z_min, z_max] are kept; a pixel hit by several classes keeps the
 * one with the highest projection priority. Untouched pixels are Void.
 * \throws ConfigError when z_min >= z_max.
 */
LabelImage render_label_image(const VoxelLabelMap &map,
                              const RigidTransform &lidar_pose_world,
                              const RigidTransform &extrinsic,
                              const BevGeometry &geometry, const ZBand &band,
                              int jobs = 1);

/// RADAR -> world pose given the LIDAR -> world pose and LIDAR -> RADAR.
RigidTransform radar_pose_in_world(const RigidTransform &lidar_pose_world,
                                   const RigidTransform &extrinsic);

struct StackedInput {
  std::vector<BevImage> channels;  // 0 = newest frame
  std::vector<double> frame_timestamps;
};

/**
 * \brief One- or three-channel network input.
 *
 * Channel 0 is the BEV of the newest frame. Channel k is the BEV of the
 * k-th previous frame resampled into the newest radar frame through the
 * relative pose radar(t0)^-1 * radar(t-k) (nearest pixel, 0 outside).
 * `frames` must be in time order; only the last `n` are used.
 * \throws InsufficientDataError when fewer than n frames are given.
 */
StackedInput stack_frames(std::span<const RadarFrame> frames,
                          std::span<const StampedPose> lidar_traj, int n,
                          const BevGeometry &geometry,
                          const RigidTransform &extrinsic = RigidTransform());

/// Nearest-pixel resampling of `src` through `src_from_dst` (maps points of
/// the destination frame into the source frame).
BevImage warp_bev(const BevImage &src, const RigidTransform &src_from_dst);

/// value / 65535.
BevImageF normalize_intensity(const BevImage &img);

}  // namespace ross
