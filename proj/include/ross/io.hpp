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
 * \file io.hpp
 * \brief Readers and writers for every on-disk artifact.
 *
 * Formats:
 *  - cloud: `<stem>.bin` little-endian float32 x,y,z,intensity (16 B/point),
 *    `<stem>.label` little-endian uint32 per point, optional `<stem>.meta`
 *    sidecar holding `timestamp`.
 *  - trajectory: text, `timestamp tx ty tz qx qy qz qw` per line.
 *  - radar frame: 16-bit grayscale PNG (rows = azimuth, cols = range bins)
 *    with a `<stem>.meta` sidecar (`range_resolution`,
 *    `azimuth_0_direction`, `timestamp`).
 *  - label image: 8-bit grayscale PNG, values 0..3, sidecar
 *    (`meters_per_pixel`, `center_row`, `center_col`, `timestamp`).
 *  - BEV image: 16-bit grayscale PNG with the label-image sidecar keys.
 *  - calibration: one line `tx ty tz qx qy qz qw` plus
 *    `# rms_residual = ...`.
 *
 * Every reader throws FormatError on malformed input. Writers go through a
 * temporary file and rename, so a failed write never leaves a partial file
 * at the destination.
 */
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ross/geometry.hpp"
#include "ross/types.hpp"

namespace ross::io {

namespace fs = std::filesystem;

using Bytes = std::vector<std::uint8_t>;

Bytes read_file(const fs::path &path);
/// Writes `<path>.tmp.<pid>` and renames it over `path`.
void write_file_atomic(const fs::path &path, std::span<const std::uint8_t> data);
void write_text_atomic(const fs::path &path, std::string_view text);

/// Shortest decimal form that parses back to the identical double.
std::string format_double(double v);
/// Strict parse of a full token; nullopt on trailing garbage.
std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_int(std::string_view s);

// -- sidecars ---------------------------------------------------------------

using Sidecar = std::map<std::string, std::string>;

fs::path sidecar_path(const fs::path &data_path);
Sidecar parse_sidecar(std::string_view text);
std::string format_sidecar(const Sidecar &values);
Sidecar read_sidecar(const fs::path &data_path);
double sidecar_double(const Sidecar &s, const std::string &key);
int sidecar_int(const Sidecar &s, const std::string &key);

// -- PNG --------------------------------------------------------------------

struct DecodedPng {
  int rows = 0;
  int cols = 0;
  int bit_depth = 0;
  int color_type = 0;
  std::vector<std::uint16_t> samples;  // one sample per pixel (gray only)
};

/// Decodes a single-channel gray PNG; other color types throw FormatError.
DecodedPng decode_png(std::span<const std::uint8_t> bytes);
Bytes encode_png_gray8(const Image<std::uint8_t> &img);
Bytes encode_png_gray16(const Image<std::uint16_t> &img);

// -- point clouds -----------------------------------------------------------

fs::path label_path_for(const fs::path &points_path);

/// Byte-level decoding of a cloud from its points and labels payloads.
LabeledCloud decode_cloud(std::span<const std::uint8_t> points,
                          std::span<const std::uint8_t> labels);
Bytes encode_points(const LabeledCloud &cloud);
Bytes encode_labels(const LabeledCloud &cloud);

LabeledCloud read_cloud(const fs::path &points_path);
void write_cloud(const LabeledCloud &cloud, const fs::path &points_path);

// -- trajectories -----------------------------------------------------------

Trajectory parse_trajectory(std::string_view text);
std::string format_trajectory(std::span<const StampedPose> traj);
Trajectory read_trajectory(const fs::path &path);
void write_trajectory(std::span<const StampedPose> traj, const fs::path &path);

// -- radar frames -----------------------------------------------------------

RadarFrame decode_radar_frame(std::span<const std::uint8_t> png,
                              std::string_view sidecar);
RadarFrame read_radar_frame(const fs::path &png_path);
void write_radar_frame(const RadarFrame &frame, const fs::path &png_path);

// -- label and BEV images ---------------------------------------------------

LabelImage decode_label_image(std::span<const std::uint8_t> png,
                              std::string_view sidecar);
LabelImage read_label_image(const fs::path &png_path);
void write_label_image(const LabelImage &img, const fs::path &png_path);

BevImage decode_bev_image(std::span<const std::uint8_t> png,
                          std::string_view sidecar);
BevImage read_bev_image(const fs::path &png_path);
void write_bev_image(const BevImage &img, const fs::path &png_path);

// -- calibration ------------------------------------------------------------

struct CalibrationFile {
  RigidTransform extrinsic;  // LIDAR -> RADAR
  std::optional<double> rms_residual;
};

CalibrationFile parse_calibration(std::string_view text);
std::string format_calibration(const CalibrationFile &calib);
CalibrationFile read_calibration(const fs::path &path);
void write_calibration(const CalibrationFile &calib, const fs::path &path);

}  // namespace ross::io
