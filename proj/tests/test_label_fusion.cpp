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
#include <map>
#include <random>
#include <tuple>

#include "ross/errors.hpp"
#include "ross/label_fusion.hpp"
#include "test_util.hpp"

namespace ross {
namespace {

using testing::TempDir;

// RELLIS ids that map to Void, Ground, Bushes, Obstacles in the shipped table.
constexpr std::uint32_t kRellisOf[4] = {0, 3, 19, 4};

MergedClass naive_fuse(const ClassCounts &c) {
  int best = 0;
  for (int k = 1; k < 4; ++k) {
    if (c[k] > 0 && (best == 0 || c[k] > c[best])) best = k;
  }
  return static_cast<MergedClass>(best);
}

TEST(FuseCellTest, Examples) {
  EXPECT_EQ(fuse_cell({5, 1, 0, 0}), MergedClass::kGround);
  EXPECT_EQ(fuse_cell({0, 2, 2, 2}), MergedClass::kGround);
  EXPECT_EQ(fuse_cell({0, 0, 1, 1}), MergedClass::kBushes);
  EXPECT_EQ(fuse_cell({3, 0, 0, 0}), MergedClass::kVoid);
  EXPECT_THROW(fuse_cell({0, 0, 0, 0}), DegenerateError);
}

TEST(FuseCellTest, MatchesNaiveOracle) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<std::uint32_t> d(0, 4);
  for (int i = 0; i < 1000; ++i) {
    ClassCounts c{d(rng), d(rng), d(rng), d(rng)};
    if (c == ClassCounts{}) c[0] = 1;
    EXPECT_EQ(fuse_cell(c), naive_fuse(c));
  }
}

LabeledCloud one_point(const Vec3 &p, std::uint32_t label, double t) {
  LabeledCloud c;
  c.points.push_back({static_cast<float>(p.x()), static_cast<float>(p.y()),
                      static_cast<float>(p.z()), 0.5f});
  c.labels.push_back(label);
  c.timestamp = t;
  return c;
}

TEST(AccumulateTest, IdentityAndTranslation) {
  const Trajectory id{{0.0, RigidTransform::identity()}, {1.0, RigidTransform::identity()}};
  const LabeledCloud s = one_point({1, 2, 3}, 7, 0.5);
  const LabeledCloud out = accumulate(std::vector<LabeledCloud>{s}, id);
  EXPECT_EQ(out.points, s.points);
  EXPECT_EQ(out.labels, s.labels);

  const Trajectory tr{{0.0, RigidTransform::identity()},
                      {1.0, RigidTransform::from_translation({5, 0, 0})}};
  const LabeledCloud two =
      accumulate(std::vector<LabeledCloud>{one_point({1, 2, 3}, 7, 0.0),
                                           one_point({1, 2, 3}, 7, 1.0)},
                 tr);
  ASSERT_EQ(two.size(), 2u);
  EXPECT_EQ(two.points[1].x, 6.0f);
  EXPECT_EQ(two.points[1].y, 2.0f);
}

TEST(AccumulateTest, MatchesPerPointOracle) {
  std::mt19937_64 rng(32);
  Trajectory traj;
  for (int i = 0; i <= 10; ++i) {
    traj.push_back({0.5 * i, RigidTransform::from_rpy(0.01 * i, -0.02 * i, 0.3 * i) *
                                 RigidTransform::from_translation({1.0 * i, 0.5 * i, 0})});
  }
  std::vector<LabeledCloud> scans;
  for (int s = 0; s < 5; ++s) {
    LabeledCloud c;
    for (int k = 0; k < 200; ++k) {
      const Vec3 p = testing::random_vec3(rng, 30.0);
      c.points.push_back({static_cast<float>(p.x()), static_cast<float>(p.y()),
                          static_cast<float>(p.z()), static_cast<float>(k)});
      c.labels.push_back(static_cast<std::uint32_t>(k % 20));
    }
    c.timestamp = testing::uniform(rng, 0.0, 5.0);
    scans.push_back(c);
  }
  const LabeledCloud out = accumulate(scans, traj);
  std::size_t n = 0;
  for (const auto &c : scans) {
    // Oracle pose: slerp and lerp between the bracketing samples, as matrices.
    const double t = c.timestamp;
    const auto hi =
        std::upper_bound(traj.begin(), traj.end(), t,
                         [](double v, const StampedPose &s) { return v < s.timestamp; });
    const auto &a = *(hi - 1);
    const auto &b = (hi == traj.end()) ? a : *hi;
    const double u = (hi == traj.end()) ? 0.0 : (t - a.timestamp) / (b.timestamp - a.timestamp);
    const Eigen::Quaterniond q = a.pose.rotation().slerp(u, b.pose.rotation());
    const Vec3 tr = (1 - u) * a.pose.translation() + u * b.pose.translation();
    for (std::size_t i = 0; i < c.size(); ++i, ++n) {
      const Vec3 w = q.toRotationMatrix() * c.points[i].xyz() + tr;
      // Output is float32; allow its rounding.
      EXPECT_NEAR(out.points[n].x, w.x(), 1e-5 * (1 + std::abs(w.x())));
      EXPECT_NEAR(out.points[n].y, w.y(), 1e-5 * (1 + std::abs(w.y())));
      EXPECT_NEAR(out.points[n].z, w.z(), 1e-5 * (1 + std::abs(w.z())));
      EXPECT_EQ(out.points[n].intensity, c.points[i].intensity);
      EXPECT_EQ(out.labels[n], c.labels[i]);
    }
  }
  EXPECT_EQ(out.size(), n);
}

TEST(AccumulateTest, OffTrajectoryScanNamed) {
  const Trajectory tr{{0.0, RigidTransform::identity()}, {1.0, RigidTransform::identity()}};
  try {
    accumulate(std::vector<LabeledCloud>{one_point({0, 0, 0}, 1, 0.5),
                                         one_point({0, 0, 0}, 1, 2.0)},
               tr);
    FAIL() << "expected RangeError";
  } catch (const RangeError &e) {
    EXPECT_NE(std::string(e.what()).find("scan 1"), std::string::npos) << e.what();
  }
}

LabeledCloud cloud_of(const std::vector<std::pair<Vec3, MergedClass>> &pts) {
  LabeledCloud c;
  for (const auto &[p, m] : pts) {
    c.points.push_back({static_cast<float>(p.x()), static_cast<float>(p.y()),
                        static_cast<float>(p.z()), 0.f});
    c.labels.push_back(kRellisOf[to_id(m)]);
  }
  return c;
}

TEST(BuildVoxelMapTest, Examples) {
  const ClassMap &cm = ClassMap::builtin();
  auto m = build_voxel_map(cloud_of({{{0.1, 0.1, 0.1}, MergedClass::kGround},
                                     {{0.2, 0.1, 0.1}, MergedClass::kGround},
                                     {{0.3, 0.1, 0.1}, MergedClass::kBushes}}),
                           cm, 1.0);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m.cells().begin()->second.fused, MergedClass::kGround);

  m = build_voxel_map(cloud_of({{{0.1, 0.1, 0.1}, MergedClass::kBushes},
                                {{0.2, 0.1, 0.1}, MergedClass::kObstacles}}),
                      cm, 1.0);
  EXPECT_EQ(m.cells().begin()->second.fused, MergedClass::kBushes);
  EXPECT_THROW(build_voxel_map(LabeledCloud{}, cm, 0.0), ConfigError);
}

LabeledCloud random_world_cloud(std::mt19937_64 &rng, std::size_t n, double extent) {
  LabeledCloud c;
  std::uniform_int_distribution<int> cls(0, 3);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 p = testing::random_vec3(rng, extent);
    c.points.push_back({static_cast<float>(p.x()), static_cast<float>(p.y()),
                        static_cast<float>(p.z()), 0.f});
    c.labels.push_back(kRellisOf[cls(rng)]);
  }
  return c;
}

TEST(BuildVoxelMapTest, MatchesBruteForce) {
  std::mt19937_64 rng(33);
  const LabeledCloud c = random_world_cloud(rng, 10000, 3.0);
  const Vec3 origin(0.1, -0.2, 0.05);
  const double s = 0.5;
  std::map<std::tuple<long, long, long>, ClassCounts> oracle;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Vec3 p = c.points[i].xyz();
    const auto key = std::make_tuple(static_cast<long>(std::floor((p.x() - origin.x()) / s)),
                                     static_cast<long>(std::floor((p.y() - origin.y()) / s)),
                                     static_cast<long>(std::floor((p.z() - origin.z()) / s)));
    oracle[key][to_id(ClassMap::builtin().remap(c.labels[i]))]++;
  }
  const VoxelLabelMap m = build_voxel_map(c, ClassMap::builtin(), s, origin);
  ASSERT_EQ(m.size(), oracle.size());
  for (const auto &[key, counts] : oracle) {
    const auto it = m.cells().find(
        {static_cast<std::int32_t>(std::get<0>(key)), static_cast<std::int32_t>(std::get<1>(key)),
         static_cast<std::int32_t>(std::get<2>(key))});
    ASSERT_NE(it, m.cells().end());
    EXPECT_EQ(it->second.counts, counts);
    EXPECT_EQ(it->second.fused, naive_fuse(counts));
  }
  EXPECT_EQ(m.total_points(), c.size());
  EXPECT_LE(m.size(), c.size());
}

TEST(BuildVoxelMapTest, JobsPermutationAndFoldInvariant) {
  std::mt19937_64 rng(34);
  LabeledCloud c = random_world_cloud(rng, 5000, 2.0);
  const VoxelLabelMap ref = build_voxel_map(c, ClassMap::builtin(), 0.4);
  for (int jobs : {2, 3, 8}) {
    EXPECT_EQ(build_voxel_map(c, ClassMap::builtin(), 0.4, Vec3::Zero(), jobs), ref);
  }

  std::vector<std::size_t> perm(c.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  LabeledCloud shuffled;
  for (std::size_t i : perm) {
    shuffled.points.push_back(c.points[i]);
    shuffled.labels.push_back(c.labels[i]);
  }
  EXPECT_EQ(build_voxel_map(shuffled, ClassMap::builtin(), 0.4), ref);

  VoxelLabelMap folded(0.4, Vec3::Zero());
  for (std::size_t start = 0; start < c.size(); start += 700) {
    LabeledCloud part;
    for (std::size_t i = start; i < std::min(c.size(), start + 700); ++i) {
      part.points.push_back(c.points[i]);
      part.labels.push_back(c.labels[i]);
    }
    folded.add_cloud(part, ClassMap::builtin());
  }
  EXPECT_EQ(folded, ref);
}

TEST(VoxelLabelMapTest, MonotonicityAndPrune) {
  VoxelLabelMap m(1.0, Vec3::Zero());
  m.add_point({0.5, 0.5, 0.5}, MergedClass::kBushes);
  m.add_point({0.5, 0.5, 0.5}, MergedClass::kObstacles);
  EXPECT_EQ(m.cells().begin()->second.fused, MergedClass::kBushes);
  m.add_point({0.5, 0.5, 0.5}, MergedClass::kObstacles);
  EXPECT_EQ(m.cells().begin()->second.fused, MergedClass::kObstacles);
  m.add_point({5.5, 0.5, 0.5}, MergedClass::kVoid);
  EXPECT_EQ(m.size(), 2u);
  m.prune(2);
  EXPECT_EQ(m.size(), 1u);
  EXPECT_EQ(m.total_points(), 3u);
}

TEST(VoxelMapFileTest, RoundTripAndErrors) {
  TempDir dir("fuse");
  std::mt19937_64 rng(35);
  const VoxelLabelMap m =
      build_voxel_map(random_world_cloud(rng, 2000, 5.0), ClassMap::builtin(), 0.3, Vec3(1, 2, 3));
  write_voxel_map(m, dir / "map.bin");
  EXPECT_EQ(read_voxel_map(dir / "map.bin"), m);
  const auto bytes = encode_voxel_map(m);
  EXPECT_EQ(bytes.size(), 32 + 28 * m.size());
  EXPECT_THROW(decode_voxel_map(std::span(bytes).first(bytes.size() - 3)), FormatError);
  EXPECT_THROW(decode_voxel_map(std::span(bytes).first(10)), FormatError);
}

}  // namespace
}  // namespace ross
