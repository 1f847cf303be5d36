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

#include "ross/io.hpp"

#include <unistd.h>

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "ross/errors.hpp"

namespace ross {

void LabeledCloud::validate() const {
  if (points.size() != labels.size()) {
    throw FormatError("cloud has " + std::to_string(points.size()) +
                      " points but " + std::to_string(labels.size()) +
                      " labels");
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto &p = points[i];
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) {
      throw FormatError("non-finite coordinate at point " + std::to_string(i));
    }
  }
}

}  // namespace ross

namespace ross::io {

static_assert(std::endian::native == std::endian::little,
              "on-disk formats assume a little-endian host");

Bytes read_file(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  Bytes data((std::istreambuf_iterator<char>(in)),
             std::istreambuf_iterator<char>());
  return data;
}

void write_file_atomic(const fs::path &path,
                       std::span<const std::uint8_t> data) {
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot write " + tmp.string());
    out.write(reinterpret_cast<const char *>(data.data()),
              static_cast<std::streamsize>(data.size()));
    if (!out) {
      out.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw FormatError("short write to " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw FormatError("cannot rename into " + path.string());
  }
}

void write_text_atomic(const fs::path &path, std::string_view text) {
  write_file_atomic(
      path, {reinterpret_cast<const std::uint8_t *>(text.data()), text.size()});
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return {buf, res.ptr};
}

std::optional<double> parse_double(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || s.empty()) {
    return std::nullopt;
  }
  return v;
}

std::optional<long long> parse_int(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  long long v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || s.empty()) {
    return std::nullopt;
  }
  return v;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    const std::size_t b = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '\r') ++i;
    if (i > b) out.push_back(s.substr(b, i - b));
  }
  return out;
}

std::string as_string(std::span<const std::uint8_t> b) {
  return {reinterpret_cast<const char *>(b.data()), b.size()};
}

void require_finite(double v, const char *what) {
  if (!std::isfinite(v)) {
    throw FormatError(std::string(what) + " is not finite");
  }
}

}  // namespace

// -- sidecars ---------------------------------------------------------------

fs::path sidecar_path(const fs::path &data_path) {
  fs::path p = data_path;
  p.replace_extension(".meta");
  return p;
}

Sidecar parse_sidecar(std::string_view text) {
  Sidecar out;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw FormatError("sidecar line " + std::to_string(line_no) +
                        ": expected `key = value`");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) {
      throw FormatError("sidecar line " + std::to_string(line_no) +
                        ": empty key");
    }
    if (!out.emplace(key, value).second) {
      throw FormatError("sidecar line " + std::to_string(line_no) +
                        ": duplicate key '" + key + "'");
    }
  }
  return out;
}

std::string format_sidecar(const Sidecar &values) {
  std::string out;
  for (const auto &[k, v] : values) out += k + " = " + v + "\n";
  return out;
}

Sidecar read_sidecar(const fs::path &data_path) {
  const fs::path p = sidecar_path(data_path);
  if (!fs::exists(p)) {
    throw FormatError("missing sidecar " + p.string());
  }
  return parse_sidecar(as_string(read_file(p)));
}

double sidecar_double(const Sidecar &s, const std::string &key) {
  const auto it = s.find(key);
  if (it == s.end()) throw FormatError("sidecar missing key '" + key + "'");
  const auto v = parse_double(it->second);
  if (!v || !std::isfinite(*v)) {
    throw FormatError("sidecar key '" + key + "' is not a finite number");
  }
  return *v;
}

int sidecar_int(const Sidecar &s, const std::string &key) {
  const auto it = s.find(key);
  if (it == s.end()) throw FormatError("sidecar missing key '" + key + "'");
  const auto v = parse_int(it->second);
  if (!v || *v < -(1ll << 30) || *v > (1ll << 30)) {
    throw FormatError("sidecar key '" + key + "' is not an integer");
  }
  return static_cast<int>(*v);
}

// -- point clouds -----------------------------------------------------------

fs::path label_path_for(const fs::path &points_path) {
  fs::path p = points_path;
  p.replace_extension(".label");
  return p;
}

LabeledCloud decode_cloud(std::span<const std::uint8_t> points,
                          std::span<const std::uint8_t> labels) {
  constexpr std::size_t kRecord = sizeof(PointXYZI);
  static_assert(kRecord == 16);
  if (points.size() % kRecord != 0) {
    throw FormatError("truncated points file: " + std::to_string(points.size()) +
                      " bytes, partial record at offset " +
                      std::to_string(points.size() - points.size() % kRecord));
  }
  if (labels.size() % 4 != 0) {
    throw FormatError("truncated label file: " + std::to_string(labels.size()) +
                      " bytes, partial record at offset " +
                      std::to_string(labels.size() - labels.size() % 4));
  }
  LabeledCloud cloud;
  cloud.points.resize(points.size() / kRecord);
  cloud.labels.resize(labels.size() / 4);
  if (cloud.points.size() != cloud.labels.size()) {
    throw FormatError("label/point count mismatch: " +
                      std::to_string(cloud.points.size()) + " points, " +
                      std::to_string(cloud.labels.size()) + " labels");
  }
  if (!points.empty()) std::memcpy(cloud.points.data(), points.data(), points.size());
  if (!labels.empty()) std::memcpy(cloud.labels.data(), labels.data(), labels.size());
  cloud.validate();
  return cloud;
}

Bytes encode_points(const LabeledCloud &cloud) {
  Bytes out(cloud.points.size() * sizeof(PointXYZI));
  if (!out.empty()) std::memcpy(out.data(), cloud.points.data(), out.size());
  return out;
}

Bytes encode_labels(const LabeledCloud &cloud) {
  Bytes out(cloud.labels.size() * 4);
  if (!out.empty()) std::memcpy(out.data(), cloud.labels.data(), out.size());
  return out;
}

LabeledCloud read_cloud(const fs::path &points_path) {
  const fs::path labels = label_path_for(points_path);
  if (!fs::exists(labels)) {
    throw FormatError("missing label file " + labels.string());
  }
  LabeledCloud cloud = decode_cloud(read_file(points_path), read_file(labels));
  const fs::path meta = sidecar_path(points_path);
  if (fs::exists(meta)) {
    const Sidecar s = parse_sidecar(as_string(read_file(meta)));
    cloud.timestamp = sidecar_double(s, "timestamp");
  }
  return cloud;
}

void write_cloud(const LabeledCloud &cloud, const fs::path &points_path) {
  cloud.validate();
  write_file_atomic(points_path, encode_points(cloud));
  write_file_atomic(label_path_for(points_path), encode_labels(cloud));
  write_text_atomic(sidecar_path(points_path),
                    format_sidecar({{"timestamp", format_double(cloud.timestamp)}}));
}

// -- trajectories -----------------------------------------------------------

Trajectory parse_trajectory(std::string_view text) {
  Trajectory traj;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    const auto tok = split_ws(line);
    if (tok.empty()) continue;
    const std::string where = "trajectory line " + std::to_string(line_no);
    if (tok.size() != 8) {
      throw FormatError(where + ": expected 8 fields, got " +
                        std::to_string(tok.size()));
    }
    double v[8];
    for (int i = 0; i < 8; ++i) {
      const auto d = parse_double(tok[i]);
      if (!d || !std::isfinite(*d)) {
        throw FormatError(where + ": field " + std::to_string(i + 1) +
                          " is not a finite number");
      }
      v[i] = *d;
    }
    const Eigen::Quaterniond q(v[7], v[4], v[5], v[6]);
    if (std::abs(q.norm() - 1.0) > 1e-3) {
      throw FormatError(where + ": quaternion norm " +
                        std::to_string(q.norm()) + " deviates from 1");
    }
    if (!traj.empty() && !(v[0] > traj.back().timestamp)) {
      throw FormatError(where + ": timestamp " + format_double(v[0]) +
                        " not greater than previous " +
                        format_double(traj.back().timestamp));
    }
    traj.push_back({v[0], RigidTransform(q, Vec3(v[1], v[2], v[3]))});
  }
  return traj;
}

std::string format_trajectory(std::span<const StampedPose> traj) {
  check_monotonic(traj);
  std::string out;
  for (const auto &s : traj) {
    const auto &t = s.pose.translation();
    const auto &q = s.pose.rotation();
    out += format_double(s.timestamp) + ' ' + format_double(t.x()) + ' ' +
           format_double(t.y()) + ' ' + format_double(t.z()) + ' ' +
           format_double(q.x()) + ' ' + format_double(q.y()) + ' ' +
           format_double(q.z()) + ' ' + format_double(q.w()) + '\n';
  }
  return out;
}

Trajectory read_trajectory(const fs::path &path) {
  return parse_trajectory(as_string(read_file(path)));
}

void write_trajectory(std::span<const StampedPose> traj, const fs::path &path) {
  write_text_atomic(path, format_trajectory(traj));
}

// -- radar frames -----------------------------------------------------------

RadarFrame decode_radar_frame(std::span<const std::uint8_t> png,
                              std::string_view sidecar) {
  const Sidecar meta = parse_sidecar(sidecar);
  const DecodedPng img = decode_png(png);
  if (img.bit_depth != 16) {
    throw FormatError("radar frame PNG must be 16-bit, got " +
                      std::to_string(img.bit_depth));
  }
  RadarFrame frame;
  frame.range_resolution = sidecar_double(meta, "range_resolution");
  if (!(frame.range_resolution > 0.0)) {
    throw FormatError("range_resolution must be positive");
  }
  frame.azimuth_0_direction = sidecar_double(meta, "azimuth_0_direction");
  frame.timestamp = sidecar_double(meta, "timestamp");
  frame.energy = Image<std::uint16_t>(img.rows, img.cols);
  frame.energy.data() = img.samples;
  return frame;
}

RadarFrame read_radar_frame(const fs::path &png_path) {
  const fs::path meta = sidecar_path(png_path);
  if (!fs::exists(meta)) throw FormatError("missing sidecar " + meta.string());
  return decode_radar_frame(read_file(png_path), as_string(read_file(meta)));
}

void write_radar_frame(const RadarFrame &frame, const fs::path &png_path) {
  require_finite(frame.range_resolution, "range_resolution");
  require_finite(frame.azimuth_0_direction, "azimuth_0_direction");
  require_finite(frame.timestamp, "timestamp");
  if (!(frame.range_resolution > 0.0)) {
    throw ConfigError("range_resolution must be positive");
  }
  write_file_atomic(png_path, encode_png_gray16(frame.energy));
  write_text_atomic(
      sidecar_path(png_path),
      format_sidecar({{"range_resolution", format_double(frame.range_resolution)},
                      {"azimuth_0_direction",
                       format_double(frame.azimuth_0_direction)},
                      {"timestamp", format_double(frame.timestamp)}}));
}

// -- label and BEV images ---------------------------------------------------

namespace {

BevGeometry geometry_from(const Sidecar &meta, int rows, int cols) {
  BevGeometry g;
  g.rows = rows;
  g.cols = cols;
  g.meters_per_pixel = sidecar_double(meta, "meters_per_pixel");
  if (!(g.meters_per_pixel > 0.0)) {
    throw FormatError("meters_per_pixel must be positive");
  }
  g.center_row = sidecar_int(meta, "center_row");
  g.center_col = sidecar_int(meta, "center_col");
  return g;
}

double optional_timestamp(const Sidecar &meta) {
  return meta.count("timestamp") ? sidecar_double(meta, "timestamp") : 0.0;
}

Sidecar geometry_sidecar(const BevGeometry &g, double timestamp) {
  require_finite(g.meters_per_pixel, "meters_per_pixel");
  require_finite(timestamp, "timestamp");
  return {{"meters_per_pixel", format_double(g.meters_per_pixel)},
          {"center_row", std::to_string(g.center_row)},
          {"center_col", std::to_string(g.center_col)},
          {"timestamp", format_double(timestamp)}};
}

template <class ImageT>
void check_geometry(const ImageT &img, const BevGeometry &g) {
  if (img.rows() != g.rows || img.cols() != g.cols) {
    throw ShapeError("image size does not match its geometry");
  }
}

}  // namespace

LabelImage decode_label_image(std::span<const std::uint8_t> png,
                              std::string_view sidecar) {
  const Sidecar meta = parse_sidecar(sidecar);
  const DecodedPng img = decode_png(png);
  if (img.bit_depth != 8) {
    throw FormatError("label PNG must be 8-bit, got " +
                      std::to_string(img.bit_depth));
  }
  LabelImage out;
  out.geometry = geometry_from(meta, img.rows, img.cols);
  out.timestamp = optional_timestamp(meta);
  out.classes = Image<std::uint8_t>(img.rows, img.cols);
  for (std::size_t i = 0; i < img.samples.size(); ++i) {
    if (img.samples[i] >= kNumMergedClasses) {
      throw FormatError("label value " + std::to_string(img.samples[i]) +
                        " at pixel " + std::to_string(i) + " outside 0..3");
    }
    out.classes.data()[i] = static_cast<std::uint8_t>(img.samples[i]);
  }
  return out;
}

LabelImage read_label_image(const fs::path &png_path) {
  const fs::path meta = sidecar_path(png_path);
  if (!fs::exists(meta)) throw FormatError("missing sidecar " + meta.string());
  return decode_label_image(read_file(png_path), as_string(read_file(meta)));
}

void write_label_image(const LabelImage &img, const fs::path &png_path) {
  check_geometry(img.classes, img.geometry);
  for (auto v : img.classes.data()) {
    if (v >= kNumMergedClasses) throw FormatError("label value outside 0..3");
  }
  write_file_atomic(png_path, encode_png_gray8(img.classes));
  write_text_atomic(sidecar_path(png_path),
                    format_sidecar(geometry_sidecar(img.geometry, img.timestamp)));
}

BevImage decode_bev_image(std::span<const std::uint8_t> png,
                          std::string_view sidecar) {
  const Sidecar meta = parse_sidecar(sidecar);
  const DecodedPng img = decode_png(png);
  if (img.bit_depth != 16) {
    throw FormatError("BEV PNG must be 16-bit, got " +
                      std::to_string(img.bit_depth));
  }
  BevImage out;
  out.geometry = geometry_from(meta, img.rows, img.cols);
  out.timestamp = optional_timestamp(meta);
  out.pixels = Image<std::uint16_t>(img.rows, img.cols);
  out.pixels.data() = img.samples;
  return out;
}

BevImage read_bev_image(const fs::path &png_path) {
  const fs::path meta = sidecar_path(png_path);
  if (!fs::exists(meta)) throw FormatError("missing sidecar " + meta.string());
  return decode_bev_image(read_file(png_path), as_string(read_file(meta)));
}

void write_bev_image(const BevImage &img, const fs::path &png_path) {
  check_geometry(img.pixels, img.geometry);
  write_file_atomic(png_path, encode_png_gray16(img.pixels));
  write_text_atomic(sidecar_path(png_path),
                    format_sidecar(geometry_sidecar(img.geometry, img.timestamp)));
}

// -- calibration ------------------------------------------------------------

CalibrationFile parse_calibration(std::string_view text) {
  CalibrationFile out;
  bool have_pose = false;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto body = trim(line.substr(1));
      const auto eq = body.find('=');
      if (eq != std::string_view::npos &&
          trim(body.substr(0, eq)) == "rms_residual") {
        const auto v = parse_double(trim(body.substr(eq + 1)));
        if (!v || !std::isfinite(*v) || *v < 0.0) {
          throw FormatError("calibration line " + std::to_string(line_no) +
                            ": bad rms_residual");
        }
        out.rms_residual = *v;
      }
      continue;
    }
    if (have_pose) {
      throw FormatError("calibration line " + std::to_string(line_no) +
                        ": more than one transform line");
    }
    const auto tok = split_ws(line);
    if (tok.size() != 7) {
      throw FormatError("calibration line " + std::to_string(line_no) +
                        ": expected `tx ty tz qx qy qz qw`");
    }
    double v[7];
    for (int i = 0; i < 7; ++i) {
      const auto d = parse_double(tok[i]);
      if (!d || !std::isfinite(*d)) {
        throw FormatError("calibration line " + std::to_string(line_no) +
                          ": field " + std::to_string(i + 1) +
                          " is not a finite number");
      }
      v[i] = *d;
    }
    const Eigen::Quaterniond q(v[6], v[3], v[4], v[5]);
    if (std::abs(q.norm() - 1.0) > 1e-3) {
      throw FormatError("calibration line " + std::to_string(line_no) +
                        ": quaternion is not unit length");
    }
    out.extrinsic = RigidTransform(q, Vec3(v[0], v[1], v[2]));
    have_pose = true;
  }
  if (!have_pose) throw FormatError("calibration file has no transform line");
  return out;
}

std::string format_calibration(const CalibrationFile &calib) {
  const auto &t = calib.extrinsic.translation();
  const auto &q = calib.extrinsic.rotation();
  std::string out = format_double(t.x()) + ' ' + format_double(t.y()) + ' ' +
                    format_double(t.z()) + ' ' + format_double(q.x()) + ' ' +
                    format_double(q.y()) + ' ' + format_double(q.z()) + ' ' +
                    format_double(q.w()) + '\n';
  if (calib.rms_residual) {
    out += "# rms_residual = " + format_double(*calib.rms_residual) + '\n';
  }
  return out;
}

CalibrationFile read_calibration(const fs::path &path) {
  return parse_calibration(as_string(read_file(path)));
}

void write_calibration(const CalibrationFile &calib, const fs::path &path) {
  write_text_atomic(path, format_calibration(calib));
}

}  // namespace ross::io
