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

#include <cstring>
#include <random>
#include <string>

#include "ross/errors.hpp"
#include "ross/io.hpp"
#include "test_util.hpp"

namespace ross {
namespace {

using testing::TempDir;

LabeledCloud random_cloud(std::mt19937_64 &rng, std::size_t n) {
  LabeledCloud c;
  std::uniform_real_distribution<float> pos(-100.f, 100.f), inten(0.f, 1.f);
  std::uniform_int_distribution<std::uint32_t> lab(0, 40);
  for (std::size_t i = 0; i < n; ++i) {
    c.points.push_back({pos(rng), pos(rng), pos(rng), inten(rng)});
    c.labels.push_back(lab(rng));
  }
  c.timestamp = testing::uniform(rng, 0, 1e9);
  return c;
}

TEST(CloudIoTest, EmptyRoundTrip) {
  TempDir dir("io");
  io::write_cloud(LabeledCloud{}, dir / "a.bin");
  EXPECT_EQ(std::filesystem::file_size(dir / "a.bin"), 0u);
  EXPECT_EQ(io::read_cloud(dir / "a.bin").size(), 0u);
}

TEST(CloudIoTest, SinglePointByteLayout) {
  TempDir dir("io");
  LabeledCloud c;
  c.points.push_back({1.0f, 2.0f, 3.0f, 0.5f});
  c.labels.push_back(4);
  io::write_cloud(c, dir / "one.bin");
  const io::Bytes pts = io::read_file(dir / "one.bin");
  const io::Bytes lab = io::read_file(dir / "one.label");
  ASSERT_EQ(pts.size(), 16u);
  ASSERT_EQ(lab.size(), 4u);
  // Little-endian IEEE-754 float32 and uint32.
  const std::uint8_t expected_pts[16] = {0x00, 0x00, 0x80, 0x3f, 0x00, 0x00, 0x00, 0x40,
                                         0x00, 0x00, 0x40, 0x40, 0x00, 0x00, 0x00, 0x3f};
  EXPECT_EQ(std::memcmp(pts.data(), expected_pts, 16), 0);
  const std::uint8_t expected_lab[4] = {4, 0, 0, 0};
  EXPECT_EQ(std::memcmp(lab.data(), expected_lab, 4), 0);
  EXPECT_EQ(io::read_cloud(dir / "one.bin").points, c.points);
}

TEST(CloudIoTest, RandomRoundTripBitExact) {
  TempDir dir("io");
  std::mt19937_64 rng(11);
  const LabeledCloud c = random_cloud(rng, 10000);
  io::write_cloud(c, dir / "r.bin");
  const LabeledCloud back = io::read_cloud(dir / "r.bin");
  EXPECT_EQ(back.points, c.points);
  EXPECT_EQ(back.labels, c.labels);
  EXPECT_EQ(back.timestamp, c.timestamp);
}

TEST(CloudIoTest, TruncatedPointsReportsOffset) {
  const io::Bytes pts(16 * 3 + 5, 0), lab(12, 0);
  try {
    io::decode_cloud(pts, lab);
    FAIL() << "expected FormatError";
  } catch (const FormatError &e) {
    EXPECT_NE(std::string(e.what()).find("offset 48"), std::string::npos) << e.what();
  }
}

TEST(CloudIoTest, CountMismatchAndMissingLabels) {
  EXPECT_THROW(io::decode_cloud(io::Bytes(32, 0), io::Bytes(4, 0)), FormatError);
  EXPECT_THROW(io::decode_cloud(io::Bytes(16, 0), io::Bytes(6, 0)), FormatError);
  TempDir dir("io");
  io::write_file_atomic(dir / "x.bin", io::Bytes(16, 0));
  EXPECT_THROW(io::read_cloud(dir / "x.bin"), FormatError);
}

TEST(CloudIoTest, NonFiniteRejected) {
  io::Bytes pts(16, 0);
  const float nan = std::numeric_limits<float>::quiet_NaN();
  std::memcpy(pts.data() + 4, &nan, 4);
  EXPECT_THROW(io::decode_cloud(pts, io::Bytes(4, 0)), FormatError);
}

TEST(TrajectoryIoTest, IdentityLine) {
  const Trajectory t = io::parse_trajectory("0 0 0 0 0 0 0 1\n");
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t[0].timestamp, 0.0);
  EXPECT_EQ(max_abs_difference(t[0].pose, RigidTransform::identity()), 0.0);
}

TEST(TrajectoryIoTest, DuplicateTimestampReportsLine) {
  try {
    io::parse_trajectory("1 0 0 0 0 0 0 1\n1 0 0 0 0 0 0 1\n");
    FAIL() << "expected FormatError";
  } catch (const FormatError &e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST(TrajectoryIoTest, MalformedLines) {
  EXPECT_THROW(io::parse_trajectory("0 0 0 0 0 0 1\n"), FormatError);
  EXPECT_THROW(io::parse_trajectory("0 0 0 0 0 0 0 x\n"), FormatError);
  EXPECT_THROW(io::parse_trajectory("0 0 0 0 0 0 0 2\n"), FormatError);
  EXPECT_THROW(io::parse_trajectory("0 nan 0 0 0 0 0 1\n"), FormatError);
  EXPECT_THROW(io::parse_trajectory("2 0 0 0 0 0 0 1\n1 0 0 0 0 0 0 1\n"), FormatError);
}

TEST(TrajectoryIoTest, SlightlyDenormalizedQuaternionIsRenormalized) {
  const Trajectory t = io::parse_trajectory("0 0 0 0 0 0 0.7072 0.7072\n");
  EXPECT_NEAR(t[0].pose.rotation().norm(), 1.0, 1e-15);
  EXPECT_NEAR(t[0].pose.yaw(), std::numbers::pi / 2, 1e-9);
}

TEST(TrajectoryIoTest, RandomRoundTrip) {
  TempDir dir("io");
  std::mt19937_64 rng(12);
  Trajectory t;
  double ts = 0.0;
  for (int i = 0; i < 100; ++i) {
    ts += testing::uniform(rng, 0.01, 1.0);
    t.push_back({ts, testing::random_transform(rng, 100.0)});
  }
  io::write_trajectory(t, dir / "traj.txt");
  const Trajectory back = io::read_trajectory(dir / "traj.txt");
  ASSERT_EQ(back.size(), t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_EQ(back[i].timestamp, t[i].timestamp);
    EXPECT_LT(max_abs_difference(back[i].pose, t[i].pose), 1e-12);
  }
}

RadarFrame radar_frame(int az, int bins, std::uint16_t fill = 0) {
  RadarFrame f;
  f.energy = Image<std::uint16_t>(az, bins, fill);
  f.range_resolution = 0.0432;
  f.azimuth_0_direction = 0.25;
  f.timestamp = 1234.5;
  return f;
}

TEST(RadarIoTest, SmallAndSaturatedFrames) {
  TempDir dir("io");
  RadarFrame f = radar_frame(4, 8);
  io::write_radar_frame(f, dir / "z.png");
  EXPECT_EQ(io::read_radar_frame(dir / "z.png"), f);
  f.energy(2, 5) = 65535;
  io::write_radar_frame(f, dir / "s.png");
  const RadarFrame back = io::read_radar_frame(dir / "s.png");
  EXPECT_EQ(back.energy(2, 5), 65535);
  EXPECT_EQ(back, f);
}

TEST(RadarIoTest, RandomFrameBitExact) {
  TempDir dir("io");
  std::mt19937_64 rng(13);
  RadarFrame f = radar_frame(400, 1000);
  std::uniform_int_distribution<int> d(0, 65535);
  for (auto &v : f.energy.data()) v = static_cast<std::uint16_t>(d(rng));
  io::write_radar_frame(f, dir / "r.png");
  EXPECT_EQ(io::read_radar_frame(dir / "r.png"), f);
}

TEST(RadarIoTest, MissingSidecarAnd8BitRejected) {
  TempDir dir("io");
  io::write_radar_frame(radar_frame(4, 8), dir / "a.png");
  std::filesystem::remove(io::sidecar_path(dir / "a.png"));
  EXPECT_THROW(io::read_radar_frame(dir / "a.png"), FormatError);

  const io::Bytes png8 = io::encode_png_gray8(Image<std::uint8_t>(4, 8, 7));
  EXPECT_THROW(io::decode_radar_frame(png8, "range_resolution = 0.1\n"
                                            "azimuth_0_direction = 0\ntimestamp = 0\n"),
               FormatError);
}

LabelImage label_image(std::mt19937_64 &rng, int rows, int cols) {
  LabelImage img;
  img.geometry = BevGeometry::centered(rows, cols, 0.25);
  img.classes = Image<std::uint8_t>(rows, cols);
  std::uniform_int_distribution<int> d(0, 3);
  for (auto &v : img.classes.data()) v = static_cast<std::uint8_t>(d(rng));
  img.timestamp = 42.125;
  return img;
}

TEST(LabelIoTest, RoundTripAndValueRange) {
  TempDir dir("io");
  std::mt19937_64 rng(14);
  const LabelImage img = label_image(rng, 64, 48);
  io::write_label_image(img, dir / "l.png");
  EXPECT_EQ(io::read_label_image(dir / "l.png"), img);

  const io::Bytes bad = io::encode_png_gray8(Image<std::uint8_t>(2, 2, 4));
  EXPECT_THROW(io::decode_label_image(bad, io::format_sidecar({{"meters_per_pixel", "0.5"},
                                                                {"center_row", "1"},
                                                                {"center_col", "1"},
                                                                {"timestamp", "0"}})),
               FormatError);
}

TEST(BevIoTest, RoundTrip) {
  TempDir dir("io");
  std::mt19937_64 rng(15);
  BevImage img;
  img.geometry = {30, 20, 0.2, 3, 17};
  img.pixels = Image<std::uint16_t>(30, 20);
  std::uniform_int_distribution<int> d(0, 65535);
  for (auto &v : img.pixels.data()) v = static_cast<std::uint16_t>(d(rng));
  img.timestamp = -3.5;
  io::write_bev_image(img, dir / "b.png");
  EXPECT_EQ(io::read_bev_image(dir / "b.png"), img);
}

TEST(CalibrationIoTest, RoundTrip) {
  TempDir dir("io");
  std::mt19937_64 rng(16);
  io::CalibrationFile c{testing::random_transform(rng), 0.0123};
  io::write_calibration(c, dir / "calib.txt");
  const io::CalibrationFile back = io::read_calibration(dir / "calib.txt");
  EXPECT_LT(max_abs_difference(back.extrinsic, c.extrinsic), 1e-12);
  ASSERT_TRUE(back.rms_residual.has_value());
  EXPECT_EQ(*back.rms_residual, 0.0123);
  EXPECT_THROW(io::parse_calibration("# nothing here\n"), FormatError);
  EXPECT_THROW(io::parse_calibration("1 2 3 0 0 0\n"), FormatError);
}

TEST(SidecarTest, FormatParseAndErrors) {
  const io::Sidecar s{{"a", "1"}, {"timestamp", "2.5"}};
  EXPECT_EQ(io::parse_sidecar(io::format_sidecar(s)), s);
  EXPECT_THROW(io::parse_sidecar("no equals sign\n"), FormatError);
  EXPECT_THROW(io::sidecar_double(s, "missing"), FormatError);
  EXPECT_EQ(io::sidecar_int(s, "a"), 1);
  EXPECT_THROW(io::sidecar_int(s, "timestamp"), FormatError);
}

TEST(FormatDoubleTest, ShortestRoundTrip) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 10000; ++i) {
    std::uint64_t bits = rng();
    double v;
    std::memcpy(&v, &bits, 8);
    if (!std::isfinite(v)) continue;
    EXPECT_EQ(io::parse_double(io::format_double(v)), v);
  }
  EXPECT_EQ(io::format_double(0.5), "0.5");
  EXPECT_FALSE(io::parse_double("1.5x").has_value());
}

// Corrupted inputs must fail with FormatError or ShapeError, never crash.
TEST(FuzzTest, CorruptedInputsFailCleanly) {
  std::mt19937_64 rng(18);
  std::mt19937_64 img_rng(19);
  const io::Bytes label_png = io::encode_png_gray8(label_image(img_rng, 16, 16).classes);
  const std::string label_meta = io::format_sidecar(
      {{"meters_per_pixel", "0.5"}, {"center_row", "8"}, {"center_col", "8"}, {"timestamp", "0"}});
  const std::string traj = "0 1 2 3 0 0 0 1\n1 1 2 3 0 0 0 1\n";
  for (int i = 0; i < 500; ++i) {
    io::Bytes png = label_png;
    const int flips = 1 + static_cast<int>(rng() % 8);
    for (int k = 0; k < flips; ++k) {
      png[rng() % png.size()] ^= static_cast<std::uint8_t>(1 + rng() % 255);
    }
    if (rng() % 3 == 0) png.resize(rng() % png.size());
    try {
      io::decode_label_image(png, label_meta);
    } catch (const FormatError &) {
    } catch (const ShapeError &) {
    }

    std::string t = traj;
    t[rng() % t.size()] = static_cast<char>(rng() % 128);
    try {
      io::parse_trajectory(t);
    } catch (const FormatError &) {
    }

    io::Bytes pts(rng() % 100), lab(rng() % 30);
    for (auto &b : pts) b = static_cast<std::uint8_t>(rng());
    try {
      io::decode_cloud(pts, lab);
    } catch (const FormatError &) {
    }
  }
}

}  // namespace
}  // namespace ross
