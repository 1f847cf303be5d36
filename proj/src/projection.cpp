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

#include "ross/projection.hpp"

#include <algorithm>
#include <cmath>

#include "ross/errors.hpp"
#include "ross/parallel.hpp"

namespace ross {
namespace {

void check_geometry(const BevGeometry &g) {
  if (!(g.meters_per_pixel > 0.0) || !std::isfinite(g.meters_per_pixel)) {
    throw ConfigError("meters_per_pixel must be positive");
  }
  if (g.rows < 1 || g.cols < 1) throw ConfigError("BEV size must be >= 1x1");
}

}  // namespace

std::uint16_t sample_polar(const RadarFrame &frame, double x, double y) {
  const int na = frame.n_azimuth();
  const int nr = frame.n_range_bins();
  if (na < 1 || nr < 1) return 0;
  const double range = std::hypot(x, y);
  if (range > frame.max_range()) return 0;
  const int bin = std::min(
      static_cast<int>(std::floor(range / frame.range_resolution + 0.5)), nr - 1);
  int row = 0;
  if (range > 0.0) {
    const double rel =
        (std::atan2(y, x) - frame.azimuth_0_direction) / frame.azimuth_step();
    const long long idx = static_cast<long long>(std::floor(rel + 0.5));
    row = static_cast<int>(((idx % na) + na) % na);
  }
  return frame.energy(row, bin);
}

BevImage polar_to_bev(const RadarFrame &frame, const BevGeometry &geometry) {
  check_geometry(geometry);
  BevImage out;
  out.geometry = geometry;
  out.timestamp = frame.timestamp;
  out.pixels = Image<std::uint16_t>(geometry.rows, geometry.cols, 0);
  for (int r = 0; r < geometry.rows; ++r) {
    for (int c = 0; c < geometry.cols; ++c) {
      const Vec2 xy = geometry.pixel_center(r, c);
      out.pixels(r, c) = sample_polar(frame, xy.x(), xy.y());
    }
  }
  return out;
}

RigidTransform radar_pose_in_world(const RigidTransform &lidar_pose_world,
                                   const RigidTransform &extrinsic) {
  return compose(lidar_pose_world, extrinsic.inverse());
}

LabelImage render_label_image(const VoxelLabelMap &map,
                              const RigidTransform &lidar_pose_world,
                              const RigidTransform &extrinsic,
                              const BevGeometry &geometry, const ZBand &band,
                              int jobs) {
  check_geometry(geometry);
  if (!(band.z_min < band.z_max)) {
    throw ConfigError("z band requires z_min < z_max");
  }
  const RigidTransform world_to_radar =
      compose(extrinsic, lidar_pose_world.inverse());

  std::vector<const std::pair<const VoxelIndex, VoxelCell> *> cells;
  cells.reserve(map.size());
  for (const auto &kv : map.cells()) cells.push_back(&kv);

  // Partial rasters are combined by per-pixel max, which is order-free.
  const std::size_t k = chunk_count(cells.size(), jobs);
  std::vector<Image<std::uint8_t>> partial(
      k, Image<std::uint8_t>(geometry.rows, geometry.cols, 0));
  parallel_chunks(cells.size(), jobs,
                  [&](std::size_t chunk, std::size_t begin, std::size_t end) {
                    auto &img = partial[chunk];
                    for (std::size_t i = begin; i < end; ++i) {
                      const auto &[idx, cell] = *cells[i];
                      if (cell.fused == MergedClass::kVoid) continue;
                      const Vec3 p = apply_transform(
                          world_to_radar,
                          voxel_center(idx, map.origin(), map.voxel_size()));
                      if (p.z() < band.z_min || p.z() > band.z_max) continue;
                      const auto [r, c] = geometry.pixel_of(p.x(), p.y());
                      if (!geometry.contains(r, c)) continue;
                      auto &px = img(static_cast<int>(r), static_cast<int>(c));
                      px = std::max(px, to_id(cell.fused));
                    }
                  });

  LabelImage out;
  out.geometry = geometry;
  out.classes = std::move(partial.front());
  for (std::size_t p = 1; p < partial.size(); ++p) {
    auto &dst = out.classes.data();
    const auto &src = partial[p].data();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = std::max(dst[i], src[i]);
  }
  return out;
}

BevImage warp_bev(const BevImage &src, const RigidTransform &src_from_dst) {
  const BevGeometry &g = src.geometry;
  BevImage out;
  out.geometry = g;
  out.timestamp = src.timestamp;
  out.pixels = Image<std::uint16_t>(g.rows, g.cols, 0);
  for (int r = 0; r < g.rows; ++r) {
    for (int c = 0; c < g.cols; ++c) {
      const Vec2 q = g.pixel_center(r, c);
      const Vec3 p = apply_transform(src_from_dst, Vec3(q.x(), q.y(), 0.0));
      const auto [sr, sc] = g.pixel_of(p.x(), p.y());
      if (g.contains(sr, sc)) {
        out.pixels(r, c) = src.pixels(static_cast<int>(sr), static_cast<int>(sc));
      }
    }
  }
  return out;
}

StackedInput stack_frames(std::span<const RadarFrame> frames,
                          std::span<const StampedPose> lidar_traj, int n,
                          const BevGeometry &geometry,
                          const RigidTransform &extrinsic) {
  if (n < 1) throw ConfigError("channel count must be >= 1");
  if (frames.size() < static_cast<std::size_t>(n)) {
    throw InsufficientDataError(
        "stacking " + std::to_string(n) + " channels needs " +
        std::to_string(n) + " frames, got " + std::to_string(frames.size()));
  }
  for (std::size_t i = 1; i < frames.size(); ++i) {
    if (!(frames[i].timestamp > frames[i - 1].timestamp)) {
      throw ConfigError("radar frames must be strictly time-ordered");
    }
  }
  StackedInput out;
  const RadarFrame &newest = frames.back();
  out.channels.push_back(polar_to_bev(newest, geometry));
  out.frame_timestamps.push_back(newest.timestamp);
  if (n == 1) return out;

  const RigidTransform radar_now = radar_pose_in_world(
      interpolate_pose(lidar_traj, newest.timestamp), extrinsic);
  for (int k = 1; k < n; ++k) {
    const RadarFrame &earlier = frames[frames.size() - 1 - k];
    const RigidTransform radar_then = radar_pose_in_world(
        interpolate_pose(lidar_traj, earlier.timestamp), extrinsic);
    // Maps earlier-frame coordinates into the newest frame.
    const RigidTransform now_from_then = compose(radar_now.inverse(), radar_then);
    out.channels.push_back(
        warp_bev(polar_to_bev(earlier, geometry), now_from_then.inverse()));
    out.frame_timestamps.push_back(earlier.timestamp);
  }
  return out;
}

BevImageF normalize_intensity(const BevImage &img) {
  BevImageF out;
  out.geometry = img.geometry;
  out.timestamp = img.timestamp;
  out.pixels = Image<float>(img.pixels.rows(), img.pixels.cols());
  for (std::size_t i = 0; i < img.pixels.data().size(); ++i) {
    out.pixels.data()[i] =
        static_cast<float>(static_cast<double>(img.pixels.data()[i]) / 65535.0);
  }
  return out;
}

}  // namespace ross
