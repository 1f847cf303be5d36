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
 * \file geometry.hpp
 * \brief SE(3) transforms, trajectory interpolation and voxel indexing.
 */
#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace ross {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

/**
 * \brief Rigid body transform p' = R p + t.
 *
 * The rotation is held as a unit quaternion and renormalized on
 * construction. Used both for sensor->world poses and for extrinsics
 * between sensor frames.
 */
class RigidTransform {
 public:
  RigidTransform() = default;
  RigidTransform(const Eigen::Quaterniond &rotation, const Vec3 &translation);

  static RigidTransform identity() { return {}; }
  static RigidTransform from_translation(const Vec3 &t);
  /// Rotation about +z by `yaw` radians followed by translation `t`.
  static RigidTransform from_yaw(double yaw, const Vec3 &t = Vec3::Zero());
  /// R = Rz(yaw) * Ry(pitch) * Rx(roll).
  static RigidTransform from_rpy(double roll, double pitch, double yaw,
                                 const Vec3 &t = Vec3::Zero());

  const Eigen::Quaterniond &rotation() const { return rotation_; }
  const Vec3 &translation() const { return translation_; }

  Mat3 rotation_matrix() const { return rotation_.toRotationMatrix(); }
  Mat4 matrix() const;

  /// Heading of the rotated x axis projected onto the xy plane.
  double yaw() const;

  RigidTransform inverse() const;

 private:
  Eigen::Quaterniond rotation_{Eigen::Quaterniond::Identity()};
  Vec3 translation_{Vec3::Zero()};
};

/// Returns R p + t.
Vec3 apply_transform(const RigidTransform &T, const Vec3 &p);

/// apply(compose(a, b), p) == apply(a, apply(b, p)).
RigidTransform compose(const RigidTransform &a, const RigidTransform &b);

inline RigidTransform inverse(const RigidTransform &T) { return T.inverse(); }

inline Vec3 operator*(const RigidTransform &T, const Vec3 &p) {
  return apply_transform(T, p);
}
inline RigidTransform operator*(const RigidTransform &a,
                                const RigidTransform &b) {
  return compose(a, b);
}

/// Largest absolute difference over the top 3x4 block of the matrices.
double max_abs_difference(const RigidTransform &a, const RigidTransform &b);

struct StampedPose {
  double timestamp = 0.0;  // seconds
  RigidTransform pose;     // sensor -> world
};

using Trajectory = std::vector<StampedPose>;

/**
 * \brief Pose at time `t`: translation lerp and rotation slerp between the
 *        bracketing samples.
 *
 * Exact timestamps return the stored sample unchanged.
 * \throws RangeError if the trajectory is empty or t lies outside it.
 */
RigidTransform interpolate_pose(std::span<const StampedPose> traj, double t);

/// Throws FormatError unless timestamps are strictly increasing.
void check_monotonic(std::span<const StampedPose> traj);

struct VoxelIndex {
  int i = 0;
  int j = 0;
  int k = 0;

  friend auto operator<=>(const VoxelIndex &, const VoxelIndex &) = default;
  friend bool operator==(const VoxelIndex &, const VoxelIndex &) = default;
};

struct VoxelIndexHash {
  std::size_t operator()(const VoxelIndex &v) const noexcept {
    auto h = static_cast<std::size_t>(static_cast<unsigned>(v.i)) * 73856093u;
    h ^= static_cast<std::size_t>(static_cast<unsigned>(v.j)) * 19349663u;
    h ^= static_cast<std::size_t>(static_cast<unsigned>(v.k)) * 83492791u;
    return h;
  }
};

/**
 * \brief floor((p - origin) / voxel_size), componentwise.
 *
 * Quotients within 1e-9 (relative) of an integer snap to it, so points on a
 * cell face land in the cell above even after rounding of origin + k*s.
 * \throws ConfigError for voxel_size <= 0 or non-finite.
 */
VoxelIndex voxel_index(const Vec3 &p, const Vec3 &origin, double voxel_size);

/// Center of voxel `v`.
Vec3 voxel_center(const VoxelIndex &v, const Vec3 &origin, double voxel_size);

}  // namespace ross
