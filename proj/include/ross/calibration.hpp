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
 * \file calibration.hpp
 * \brief LIDAR -> RADAR extrinsic estimation from corner-reflector targets.
 *
 * A spinning radar measures targets on its xy plane only, so the fit is over
 * (x, y, yaw); z, roll and pitch are mounting values supplied by the caller.
 */
#pragma once

#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "ross/geometry.hpp"
#include "ross/types.hpp"

namespace ross {

struct TargetCorrespondence {
  Vec3 lidar_point;  // reflector center, LIDAR frame
  Vec2 radar_point;  // reflector on the radar plane
};

struct CalibrationResult {
  RigidTransform extrinsic;  // LIDAR -> RADAR
  double rms_residual = 0.0;
  std::vector<double> per_target_residuals;
  int iterations = 0;
};

struct PlanarFitOptions {
  double fixed_z = 0.0;
  double fixed_roll = 0.0;
  double fixed_pitch = 0.0;
  int max_iterations = 50;
  double step_tolerance = 1e-10;
};

/// Extrinsic built from the planar parameters and the fixed mounting values.
RigidTransform planar_extrinsic(double x, double y, double yaw,
                                const PlanarFitOptions &opts);

/// Sum over targets of |planar(T * lidar) - radar|^2.
double planar_residual_sum(std::span<const TargetCorrespondence> pairs,
                           const RigidTransform &extrinsic);

/**
 * \brief Least-squares (x, y, yaw) fit.
 *
 * Initialized by the 2D Procrustes closed form, refined with Gauss-Newton.
 * Input order does not affect the result.
 * \throws InsufficientDataError for fewer than three pairs.
 * \throws DegenerateError when the lidar targets are collinear in xy.
 */
CalibrationResult estimate_extrinsics(std::span<const TargetCorrespondence> pairs,
                                      const PlanarFitOptions &opts = {});

/// Parses `lx ly lz rx ry` lines; '#' starts a comment.
std::vector<TargetCorrespondence> parse_correspondences(std::string_view text);
std::vector<TargetCorrespondence> read_correspondences(
    const std::filesystem::path &path);

/**
 * \brief Reflector peaks in a polar frame, strongest first.
 *
 * A cell qualifies when it is >= min_intensity and no 8-neighbour (azimuth
 * wraps) is larger. Peaks within min_separation meters of an already
 * accepted, stronger peak are dropped.
 */
std::vector<Vec2> detect_reflectors(const RadarFrame &frame,
                                    std::uint16_t min_intensity,
                                    double min_separation);

}  // namespace ross
