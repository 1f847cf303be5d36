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

#include "ross/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ross/errors.hpp"

namespace ross {

RigidTransform::RigidTransform(const Eigen::Quaterniond &rotation,
                               const Vec3 &translation)
    : rotation_(rotation.normalized()), translation_(translation) {}

RigidTransform RigidTransform::from_translation(const Vec3 &t) {
  return {Eigen::Quaterniond::Identity(), t};
}

RigidTransform RigidTransform::from_yaw(double yaw, const Vec3 &t) {
  return {Eigen::Quaterniond(Eigen::AngleAxisd(yaw, Vec3::UnitZ())), t};
}

RigidTransform RigidTransform::from_rpy(double roll, double pitch, double yaw,
                                        const Vec3 &t) {
  const Eigen::Quaterniond q = Eigen::AngleAxisd(yaw, Vec3::UnitZ()) *
                               Eigen::AngleAxisd(pitch, Vec3::UnitY()) *
                               Eigen::AngleAxisd(roll, Vec3::UnitX());
  return {q, t};
}

Mat4 RigidTransform::matrix() const {
  Mat4 m = Mat4::Identity();
  m.topLeftCorner<3, 3>() = rotation_matrix();
  m.topRightCorner<3, 1>() = translation_;
  return m;
}

double RigidTransform::yaw() const {
  const Vec3 x = rotation_ * Vec3::UnitX();
  return std::atan2(x.y(), x.x());
}

RigidTransform RigidTransform::inverse() const {
  const Eigen::Quaterniond qi = rotation_.conjugate();
  return {qi, -(qi * translation_)};
}

Vec3 apply_transform(const RigidTransform &T, const Vec3 &p) {
  return T.rotation() * p + T.translation();
}

RigidTransform compose(const RigidTransform &a, const RigidTransform &b) {
  return {a.rotation() * b.rotation(),
          a.rotation() * b.translation() + a.translation()};
}

double max_abs_difference(const RigidTransform &a, const RigidTransform &b) {
  const Mat4 d = a.matrix() - b.matrix();
  return d.topRows<3>().cwiseAbs().maxCoeff();
}

void check_monotonic(std::span<const StampedPose> traj) {
  for (std::size_t i = 1; i < traj.size(); ++i) {
    if (!(traj[i].timestamp > traj[i - 1].timestamp)) {
      std::ostringstream os;
      os << "trajectory timestamps not strictly increasing at sample " << i
         << " (" << traj[i - 1].timestamp << " -> " << traj[i].timestamp
         << ")";
      throw FormatError(os.str());
    }
  }
}

RigidTransform interpolate_pose(std::span<const StampedPose> traj, double t) {
  if (traj.empty()) throw RangeError("interpolate_pose: empty trajectory");
  const double first = traj.front().timestamp;
  const double last = traj.back().timestamp;
  if (!(t >= first && t <= last)) {
    std::ostringstream os;
    os.precision(17);
    os << "time " << t << " outside trajectory bounds [" << first << ", "
       << last << "]";
    throw RangeError(os.str());
  }
  // First sample with timestamp >= t.
  const auto it = std::lower_bound(
      traj.begin(), traj.end(), t,
      [](const StampedPose &s, double v) { return s.timestamp < v; });
  if (it->timestamp == t) return it->pose;

  const StampedPose &b = *it;
  const StampedPose &a = *(it - 1);
  const double alpha = (t - a.timestamp) / (b.timestamp - a.timestamp);
  const Vec3 trans =
      (1.0 - alpha) * a.pose.translation() + alpha * b.pose.translation();
  const Eigen::Quaterniond rot =
      a.pose.rotation().slerp(alpha, b.pose.rotation());
  return {rot, trans};
}

namespace {

int snapped_floor(double q) {
  const double r = std::round(q);
  if (std::abs(q - r) <= 1e-9 * std::max(1.0, std::abs(r))) {
    return static_cast<int>(r);
  }
  return static_cast<int>(std::floor(q));
}

}  // namespace

VoxelIndex voxel_index(const Vec3 &p, const Vec3 &origin, double voxel_size) {
  if (!(voxel_size > 0.0) || !std::isfinite(voxel_size)) {
    throw ConfigError("voxel_size must be positive and finite");
  }
  const Vec3 q = (p - origin) / voxel_size;
  return {snapped_floor(q.x()), snapped_floor(q.y()), snapped_floor(q.z())};
}

Vec3 voxel_center(const VoxelIndex &v, const Vec3 &origin, double voxel_size) {
  return origin + voxel_size * Vec3(v.i + 0.5, v.j + 0.5, v.k + 0.5);
}

}  // namespace ross
