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
 * \file label_fusion.hpp
 * \brief Scan accumulation through odometry and majority-vote voxel labels.
 */
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <unordered_map>
#include <vector>

#include "ross/geometry.hpp"
#include "ross/taxonomy.hpp"
#include "ross/types.hpp"

namespace ross {

/// Per-merged-class point counts, indexed by MergedClass id.
using ClassCounts = std::array<std::uint32_t, kNumMergedClasses>;

/**
 * \brief Majority vote over Ground, Bushes and Obstacles.
 *
 * Ties go to the lowest class id. Void points are counted elsewhere but never
 * win: the result is Void only when every non-Void count is zero.
 * \throws DegenerateError when all counts are zero.
 */
MergedClass fuse_cell(const ClassCounts &counts);

struct VoxelCell {
  ClassCounts counts{};
  MergedClass fused = MergedClass::kVoid;
};

/**
 * \brief Sparse voxel grid of fused labels.
 *
 * Cells exist only where at least one point fell.
 */
class VoxelLabelMap {
 public:
  using CellMap = std::unordered_map<VoxelIndex, VoxelCell, VoxelIndexHash>;

  VoxelLabelMap() = default;
  /// \throws ConfigError for non-positive voxel_size.
  VoxelLabelMap(double voxel_size, const Vec3 &origin);

  double voxel_size() const { return voxel_size_; }
  const Vec3 &origin() const { return origin_; }
  const CellMap &cells() const { return cells_; }
  std::size_t size() const { return cells_.size(); }

  /// Adds one point of merged class `c`; refreshes the cell's fused label.
  void add_point(const Vec3 &p, MergedClass c);
  /// Adds a whole cloud after remapping its RELLIS ids.
  void add_cloud(const LabeledCloud &cloud, const ClassMap &class_map);
  /// Adds `counts` to cell `v` (entrywise).
  void add_counts(const VoxelIndex &v, const ClassCounts &counts);
  /// Entrywise sum with a map of identical grid parameters.
  void merge(const VoxelLabelMap &other);

  /// Removes cells with fewer than `min_points` points.
  void prune(std::uint32_t min_points);

  /// Sum of all counts over all cells.
  std::uint64_t total_points() const;

  /// Cells in ascending (i, j, k) order.
  std::vector<std::pair<VoxelIndex, VoxelCell>> sorted_cells() const;

  friend bool operator==(const VoxelLabelMap &a, const VoxelLabelMap &b);

 private:
  double voxel_size_ = 0.25;
  Vec3 origin_ = Vec3::Zero();
  CellMap cells_;
};

/**
 * \brief Transforms every scan into the world frame through the pose
 *        interpolated at its timestamp and concatenates the results.
 * \throws RangeError naming the scan when its timestamp is off-trajectory.
 */
LabeledCloud accumulate(std::span<const LabeledCloud> scans,
                        std::span<const StampedPose> traj);

/**
 * \brief Voxelizes a world-frame cloud.
 *
 * `jobs` > 1 splits the points into contiguous chunks whose partial maps are
 * summed; counts are integers, so the result does not depend on `jobs`.
 */
VoxelLabelMap build_voxel_map(const LabeledCloud &cloud,
                              const ClassMap &class_map, double voxel_size,
                              const Vec3 &origin = Vec3::Zero(), int jobs = 1);

/// Binary map file: header float64 voxel_size, origin x/y/z, then records of
/// int32 i, j, k and uint32 counts[4], little-endian, sorted by index.
std::vector<std::uint8_t> encode_voxel_map(const VoxelLabelMap &map);
VoxelLabelMap decode_voxel_map(std::span<const std::uint8_t> bytes);
void write_voxel_map(const VoxelLabelMap &map, const std::filesystem::path &path);
VoxelLabelMap read_voxel_map(const std::filesystem::path &path);

}  // namespace ross
