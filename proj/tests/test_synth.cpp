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

#include <cmath>
#include <string>

#include "ross/errors.hpp"
#include "ross/io.hpp"
#include "ross/projection.hpp"
#include "ross/synth.hpp"
#include "test_util.hpp"

namespace ross {
namespace {

using testing::TempDir;

SceneSpec small_spec() {
  SceneSpec s;
  s.extent = 30;
  s.start = {0.0, 0.0};
  s.velocity = {1.0, 0.0};
  s.n_scans = 3;
  s.lidar_spacing = 0.25;
  s.gt_geometry = BevGeometry::centered(80, 80, 0.5);
  return s;
}

TEST(SynthTest, GroundOnlyScene) {
  const SceneSpec spec = small_spec();
  const SynthScene scene = generate_scene(spec);
  ASSERT_EQ(scene.scans.size(), 3u);
  ASSERT_EQ(scene.radar_frames.size(), 3u);
  ASSERT_EQ(scene.gt_labels.size(), 3u);
  for (const auto &scan : scene.scans) {
    ASSERT_GT(scan.size(), 0u);
    for (auto l : scan.labels) ASSERT_EQ(l, spec.ground_label);
  }
  const double covered = spec.lidar_range - spec.coverage_margin;
  for (const auto &gt : scene.gt_labels) {
    const auto &g = gt.geometry;
    for (int r = 0; r < g.rows; ++r) {
      for (int c = 0; c < g.cols; ++c) {
        const double d = g.pixel_center(r, c).norm();
        if (d < covered - 2.0) {
          EXPECT_EQ(gt.at(r, c), MergedClass::kGround) << r << "," << c;
        } else {
          EXPECT_NE(gt.at(r, c), MergedClass::kBushes);
          EXPECT_NE(gt.at(r, c), MergedClass::kObstacles);
        }
      }
    }
  }
}

TEST(SynthTest, BoxFootprintInGroundTruth) {
  SceneSpec spec = small_spec();
  BoxSpec box;
  box.center = {10.0, 0.0};
  box.yaw = 0.3;
  box.length = 3.0;
  box.width = 2.0;
  box.height = 2.0;
  spec.boxes.push_back(box);
  const SynthScene scene = generate_scene(spec);

  const RadarFrame &f = scene.radar_frames[0];
  const LabelImage &gt = scene.gt_labels[0];
  const RigidTransform radar =
      radar_pose_in_world(interpolate_pose(scene.trajectory, f.timestamp), scene.extrinsic);
  const double mpp = gt.geometry.meters_per_pixel;
  int inside = 0;
  for (int r = 0; r < gt.geometry.rows; ++r) {
    for (int c = 0; c < gt.geometry.cols; ++c) {
      const Vec2 p = gt.geometry.pixel_center(r, c);
      const Vec3 w = radar * Vec3(p.x(), p.y(), 0.0);
      // Pixel center in box coordinates.
      const Vec2 d = Eigen::Rotation2Dd(-box.yaw) * (w.head<2>() - box.center);
      const double ox = std::abs(d.x()) - box.length / 2, oy = std::abs(d.y()) - box.width / 2;
      const double outside = Vec2(std::max(ox, 0.0), std::max(oy, 0.0)).norm();
      if (ox < -mpp && oy < -mpp) {
        EXPECT_EQ(gt.at(r, c), MergedClass::kObstacles) << r << "," << c;
        ++inside;
      } else if (outside > mpp) {
        EXPECT_NE(gt.at(r, c), MergedClass::kObstacles) << r << "," << c;
      }
    }
  }
  EXPECT_GT(inside, 4);

  bool box_points = false;
  for (const auto &scan : scene.scans) {
    for (auto l : scan.labels) box_points |= l == spec.obstacle_label;
  }
  EXPECT_TRUE(box_points);
}

TEST(SynthTest, DeterministicFiles) {
  SceneSpec spec = small_spec();
  spec.bushes.push_back({{5.0, 4.0}, 1.5, 1.0});
  TempDir a("synth"), b("synth");
  write_scene(generate_scene(spec), spec, a.path());
  write_scene(generate_scene(spec), spec, b.path());
  int files = 0;
  for (const auto &e : std::filesystem::recursive_directory_iterator(a.path())) {
    if (!e.is_regular_file()) continue;
    const auto rel = std::filesystem::relative(e.path(), a.path());
    ASSERT_TRUE(std::filesystem::exists(b.path() / rel)) << rel;
    EXPECT_EQ(io::read_file(e.path()), io::read_file(b.path() / rel)) << rel;
    ++files;
  }
  EXPECT_GT(files, 10);
  EXPECT_TRUE(std::filesystem::exists(a / "pipeline.cfg"));

  spec.seed = 2;
  const SynthScene other = generate_scene(spec);
  EXPECT_NE(other.radar_frames[0].energy, generate_scene(small_spec()).radar_frames[0].energy);
}

TEST(SynthTest, WrittenSceneReadsBack) {
  const SceneSpec spec = small_spec();
  const SynthScene scene = generate_scene(spec);
  TempDir dir("synth");
  write_scene(scene, spec, dir.path());
  const Trajectory traj = io::read_trajectory(dir / "trajectory.txt");
  EXPECT_EQ(traj.size(), scene.trajectory.size());
  const auto calib = io::read_calibration(dir / "calibration.txt");
  EXPECT_LT(max_abs_difference(calib.extrinsic, scene.extrinsic), 1e-12);
  EXPECT_EQ(io::read_radar_frame(dir.path() / "radar" / "frame_000001.png"), scene.radar_frames[1]);
  EXPECT_EQ(io::read_label_image(dir.path() / "gt" / "frame_000002_label.png"), scene.gt_labels[2]);
}

TEST(SynthRngTest, UniformAndNormalMoments) {
  SynthRng rng(7);
  double s = 0, s2 = 0;
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    s += u;
  }
  EXPECT_NEAR(s / 100000, 0.5, 0.01);
  s = 0;
  for (int i = 0; i < 100000; ++i) {
    const double n = rng.normal();
    s += n;
    s2 += n * n;
  }
  EXPECT_NEAR(s / 100000, 0.0, 0.02);
  EXPECT_NEAR(s2 / 100000, 1.0, 0.02);
  SynthRng x(3), y(3);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(x.draw(IntensityModel::uniform(0, 65535)),
                                           y.draw(IntensityModel::uniform(0, 65535)));
}

TEST(SceneSpecTest, ParseAndErrors) {
  const SceneSpec s = parse_scene_spec(
      "seed = 9\nextent = 50\n[box.1]\ncenter = 1 2\nsize = 3 2 1\nyaw = 0.5\n"
      "[bush.a]\ncenter = -1 0\nradius = 2\nheight = 1\n"
      "[intensity.obstacles]\nmodel = gaussian\nmean = 28000\nstd = 2000\n"
      "[radar]\nmount = 0.5 0 -1.7 0.1\n");
  EXPECT_EQ(s.seed, 9u);
  EXPECT_EQ(s.extent, 50.0);
  ASSERT_EQ(s.boxes.size(), 1u);
  EXPECT_EQ(s.boxes[0].length, 3.0);
  EXPECT_EQ(s.boxes[0].yaw, 0.5);
  ASSERT_EQ(s.bushes.size(), 1u);
  EXPECT_EQ(s.intensity[3].kind, IntensityModel::Kind::kGaussian);
  EXPECT_EQ(s.intensity[3].a, 28000.0);
  EXPECT_NEAR(s.radar_mount.yaw(), 0.1, 1e-12);

  EXPECT_THROW(parse_scene_spec("seeds = 1\n"), ConfigError);
  EXPECT_THROW(parse_scene_spec("[lidar]\nspacing = -1\n"), ConfigError);
  EXPECT_THROW(parse_scene_spec("extent = 0\n"), ConfigError);
  EXPECT_THROW(parse_scene_spec("[box.1]\ncenter = 1\n"), ConfigError);
  EXPECT_THROW(parse_scene_spec("[mystery]\nx = 1\n"), ConfigError);
  EXPECT_THROW(parse_scene_spec("[intensity.ground]\nmodel = poisson\n"), ConfigError);
  EXPECT_THROW(load_scene_spec("/nonexistent/scene.cfg"), ConfigError);
}

}  // namespace
}  // namespace ross
