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


#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "ross/calibration.hpp"
#include "ross/errors.hpp"
#include "test_util.hpp"

namespace ross {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

// Generator oracle: a 4x4 matrix built directly from the mounting angles.
Mat4 truth_matrix(double x, double y, double yaw, double z, double roll, double pitch) {
  Mat4 M = Mat4::Identity();
  M.topLeftCorner<3, 3>() = (Eigen::AngleAxisd(yaw, Vec3::UnitZ()) *
                             Eigen::AngleAxisd(pitch, Vec3::UnitY()) *
                             Eigen::AngleAxisd(roll, Vec3::UnitX()))
                                .toRotationMatrix();
  M.topRightCorner<3, 1>() = Vec3(x, y, z);
  return M;
}

std::vector<TargetCorrespondence> make_pairs(std::mt19937_64 &rng, const Mat4 &M, int n,
                                             double sigma) {
  std::normal_distribution<double> noise(0.0, sigma);
  std::vector<TargetCorrespondence> pairs;
  for (int i = 0; i < n; ++i) {
    const Vec3 l(testing::uniform(rng, -15, 15), testing::uniform(rng, -15, 15),
                 testing::uniform(rng, -1, 1));
    const Vec3 r = (M * l.homogeneous()).head<3>();
    Vec2 rp = r.head<2>();
    if (sigma > 0) rp += Vec2(noise(rng), noise(rng));
    pairs.push_back({l, rp});
  }
  return pairs;
}

double wrap(double a) { return std::remainder(a, 2 * std::numbers::pi); }

TEST(EstimateExtrinsicsTest, NoiselessYaw30) {
  std::mt19937_64 rng(21);
  PlanarFitOptions opts;
  opts.fixed_z = -0.7;
  const auto pairs = make_pairs(rng, truth_matrix(1, 2, 30 * kDeg, opts.fixed_z, 0, 0), 10, 0);
  const CalibrationResult r = estimate_extrinsics(pairs, opts);
  EXPECT_NEAR(r.extrinsic.translation().x(), 1.0, 1e-6);
  EXPECT_NEAR(r.extrinsic.translation().y(), 2.0, 1e-6);
  EXPECT_NEAR(r.extrinsic.translation().z(), -0.7, 1e-12);
  EXPECT_NEAR(wrap(r.extrinsic.yaw() - 30 * kDeg), 0.0, 1e-6);
  EXPECT_LT(r.rms_residual, 1e-6);
}

TEST(EstimateExtrinsicsTest, NoiselessWithFixedRollPitch) {
  std::mt19937_64 rng(22);
  PlanarFitOptions opts;
  opts.fixed_z = 0.3;
  opts.fixed_roll = 0.02;
  opts.fixed_pitch = -0.03;
  const Mat4 M = truth_matrix(-3, 0.5, -100 * kDeg, 0.3, 0.02, -0.03);
  const auto pairs = make_pairs(rng, M, 8, 0);
  const CalibrationResult r = estimate_extrinsics(pairs, opts);
  EXPECT_LT((r.extrinsic.matrix() - M).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(EstimateExtrinsicsTest, IdentityHasZeroResidual) {
  std::mt19937_64 rng(23);
  const auto pairs = make_pairs(rng, Mat4::Identity(), 5, 0);
  const CalibrationResult r = estimate_extrinsics(pairs);
  EXPECT_LT(max_abs_difference(r.extrinsic, RigidTransform::identity()), 1e-9);
  EXPECT_NEAR(r.rms_residual, 0.0, 1e-12);
  ASSERT_EQ(r.per_target_residuals.size(), 5u);
}

TEST(EstimateExtrinsicsTest, RmsMatchesPerTargetResiduals) {
  std::mt19937_64 rng(24);
  const auto pairs = make_pairs(rng, truth_matrix(1, -1, 0.4, 0, 0, 0), 12, 0.05);
  const CalibrationResult r = estimate_extrinsics(pairs);
  double ss = 0;
  for (double e : r.per_target_residuals) ss += e * e;
  EXPECT_NEAR(r.rms_residual, std::sqrt(ss / r.per_target_residuals.size()), 1e-12);
  // Independent residual: project with the returned matrix.
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const Vec3 q = (r.extrinsic.matrix() * pairs[i].lidar_point.homogeneous()).head<3>();
    EXPECT_NEAR(r.per_target_residuals[i], (q.head<2>() - pairs[i].radar_point).norm(), 1e-9);
  }
}

TEST(EstimateExtrinsicsTest, Errors) {
  std::mt19937_64 rng(25);
  const auto two = make_pairs(rng, Mat4::Identity(), 2, 0);
  EXPECT_THROW(estimate_extrinsics(two), InsufficientDataError);
  std::vector<TargetCorrespondence> line;
  for (int i = 0; i < 5; ++i) {
    const Vec3 l(i, 2.0 * i, 0.1 * i);
    line.push_back({l, l.head<2>()});
  }
  EXPECT_THROW(estimate_extrinsics(line), DegenerateError);
}

TEST(EstimateExtrinsicsTest, PermutationInvariant) {
  std::mt19937_64 rng(26);
  auto pairs = make_pairs(rng, truth_matrix(2, 1, 1.0, 0, 0, 0), 10, 0.02);
  const CalibrationResult a = estimate_extrinsics(pairs);
  std::reverse(pairs.begin(), pairs.end());
  std::shuffle(pairs.begin(), pairs.end(), rng);
  const CalibrationResult b = estimate_extrinsics(pairs);
  EXPECT_EQ(a.extrinsic.matrix(), b.extrinsic.matrix());
  EXPECT_EQ(a.rms_residual, b.rms_residual);
}

TEST(EstimateExtrinsicsTest, LocalOptimality) {
  std::mt19937_64 rng(27);
  for (int trial = 0; trial < 20; ++trial) {
    const auto pairs = make_pairs(rng, truth_matrix(testing::uniform(rng, -5, 5),
                                                    testing::uniform(rng, -5, 5),
                                                    testing::uniform(rng, -3, 3), 0, 0, 0),
                                  10, 0.05);
    const CalibrationResult r = estimate_extrinsics(pairs);
    const double x = r.extrinsic.translation().x(), y = r.extrinsic.translation().y();
    const double yaw = r.extrinsic.yaw();
    const double best = planar_residual_sum(pairs, r.extrinsic);
    const PlanarFitOptions opts;
    for (double d : {-1e-3, 1e-3}) {
      EXPECT_GE(planar_residual_sum(pairs, planar_extrinsic(x + d, y, yaw, opts)), best);
      EXPECT_GE(planar_residual_sum(pairs, planar_extrinsic(x, y + d, yaw, opts)), best);
      EXPECT_GE(planar_residual_sum(pairs, planar_extrinsic(x, y, yaw + d, opts)), best);
    }
  }
}

TEST(EstimateExtrinsicsTest, ErrorShrinksWithNoise) {
  std::mt19937_64 rng(28);
  double previous = 1e9;
  for (double sigma : {0.05, 0.01, 0.001}) {
    std::vector<double> err;
    for (int i = 0; i < 50; ++i) {
      const auto pairs = make_pairs(rng, truth_matrix(1, 2, 0.5, 0, 0, 0), 10, sigma);
      const CalibrationResult r = estimate_extrinsics(pairs);
      err.push_back((r.extrinsic.translation().head<2>() - Vec2(1, 2)).norm());
    }
    std::nth_element(err.begin(), err.begin() + 25, err.end());
    EXPECT_LE(err[25], previous);
    previous = err[25];
  }
}

TEST(CorrespondenceParseTest, LinesAndErrors) {
  const auto p = parse_correspondences("# header\n1 2 3 4 5\n\n-1 0 0.5 2 2 # note\n");
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p[1].lidar_point, Vec3(-1, 0, 0.5));
  EXPECT_EQ(p[1].radar_point, Vec2(2, 2));
  EXPECT_THROW(parse_correspondences("1 2 3 4\n"), FormatError);
  EXPECT_THROW(parse_correspondences("1 2 3 4 x\n"), FormatError);
}

RadarFrame blank_frame() {
  RadarFrame f;
  f.energy = Image<std::uint16_t>(400, 100, 0);
  f.range_resolution = 0.5;
  return f;
}

TEST(DetectReflectorsTest, Examples) {
  RadarFrame f = blank_frame();
  EXPECT_TRUE(detect_reflectors(f, 1000, 1.0).empty());

  f.energy(0, 10) = 60000;
  auto d = detect_reflectors(f, 1000, 1.0);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_NEAR(d[0].x(), 5.0, 1e-12);
  EXPECT_NEAR(d[0].y(), 0.0, 1e-12);

  // Second equal peak 0.3 m away along the same azimuth (not adjacent).
  f = blank_frame();
  f.range_resolution = 0.15;
  f.energy(0, 10) = 50000;
  f.energy(0, 12) = 50000;
  EXPECT_EQ(detect_reflectors(f, 1000, 1.0).size(), 1u);
  EXPECT_EQ(detect_reflectors(f, 1000, 0.1).size(), 2u);
}

TEST(DetectReflectorsTest, SortedByIntensityAndThresholded) {
  RadarFrame f = blank_frame();
  f.energy(100, 20) = 30000;  // azimuth pi/2, 10 m
  f.energy(300, 40) = 40000;  // azimuth 3pi/2, 20 m
  f.energy(200, 30) = 500;    // below threshold
  const auto d = detect_reflectors(f, 1000, 1.0);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_NEAR(d[0].x(), 0.0, 1e-9);
  EXPECT_NEAR(d[0].y(), -20.0, 1e-9);
  EXPECT_NEAR(d[1].y(), 10.0, 1e-9);
}

}  // namespace
}  // namespace ross
