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
 * \file types.hpp
 * \brief Data containers exchanged between modules: point clouds, polar
 *        radar frames and Cartesian rasters.
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <utility>
#include <span>
#include <vector>

#include "ross/geometry.hpp"
#include "ross/taxonomy.hpp"

namespace ross {

struct PointXYZI {
  float x = 0.f;
  float y = 0.f;
  float z = 0.f;
  float intensity = 0.f;

  Vec3 xyz() const { return {x, y, z}; }
  friend bool operator==(const PointXYZI &, const PointXYZI &) = default;
};

/// Per-point labelled LIDAR scan. labels[i] is a RELLIS-3D class id.
struct LabeledCloud {
  std::vector<PointXYZI> points;
  std::vector<std::uint32_t> labels;
  double timestamp = 0.0;

  std::size_t size() const { return points.size(); }
  /// Throws FormatError if sizes differ or a coordinate is not finite.
  void validate() const;
};

/// Row-major 2D raster.
template <class T>
class Image {
 public:
  Image() = default;
  Image(int rows, int cols, T fill = T{})
      : rows_(rows), cols_(cols),
        data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols),
              fill) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  T &operator()(int r, int c) {
    return data_[static_cast<std::size_t>(r) * cols_ + c];
  }
  const T &operator()(int r, int c) const {
    return data_[static_cast<std::size_t>(r) * cols_ + c];
  }

  std::span<T> row(int r) {
    return {data_.data() + static_cast<std::size_t>(r) * cols_,
            static_cast<std::size_t>(cols_)};
  }
  std::span<const T> row(int r) const {
    return {data_.data() + static_cast<std::size_t>(r) * cols_,
            static_cast<std::size_t>(cols_)};
  }

  std::vector<T> &data() { return data_; }
  const std::vector<T> &data() const { return data_; }

  friend bool operator==(const Image &, const Image &) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> data_;
};

/**
 * \brief Polar radar sweep: rows are azimuths, columns are range bins.
 *
 * Row a points along azimuth_0_direction + a * 2pi / n_azimuth; column b is
 * centered at range b * range_resolution.
 */
struct RadarFrame {
  Image<std::uint16_t> energy;
  double range_resolution = 0.0;     // meters per bin
  double azimuth_0_direction = 0.0;  // radians
  double timestamp = 0.0;

  int n_azimuth() const { return energy.rows(); }
  int n_range_bins() const { return energy.cols(); }
  double azimuth_step() const {
    return 2.0 * std::numbers::pi / static_cast<double>(n_azimuth());
  }
  double azimuth_of(int row) const {
    return azimuth_0_direction + row * azimuth_step();
  }
  double max_range() const { return n_range_bins() * range_resolution; }

  friend bool operator==(const RadarFrame &, const RadarFrame &) = default;
};

/**
 * \brief Placement of a bird's-eye-view raster on the sensor xy plane.
 *
 * Pixel (r, c) is centered at x = (c - center_col) * mpp,
 * y = (center_row - r) * mpp: x to the right, y up.
 */
struct BevGeometry {
  int rows = 512;
  int cols = 512;
  double meters_per_pixel = 0.5;
  int center_row = 256;
  int center_col = 256;

  /// Geometry with the sensor at pixel (rows / 2, cols / 2).
  static BevGeometry centered(int rows, int cols, double mpp) {
    return {rows, cols, mpp, rows / 2, cols / 2};
  }

  Vec2 pixel_center(int r, int c) const {
    return {(c - center_col) * meters_per_pixel,
            (center_row - r) * meters_per_pixel};
  }

  /// Pixel containing (x, y); may lie outside the raster.
  std::pair<long long, long long> pixel_of(double x, double y) const {
    const double col = std::floor(x / meters_per_pixel + 0.5) + center_col;
    const double row = std::floor(center_row - y / meters_per_pixel + 0.5);
    return {static_cast<long long>(row), static_cast<long long>(col)};
  }

  bool contains(long long r, long long c) const {
    return r >= 0 && c >= 0 && r < rows && c < cols;
  }

  friend bool operator==(const BevGeometry &, const BevGeometry &) = default;
};

/// Cartesian rendering of radar return energy.
struct BevImage {
  Image<std::uint16_t> pixels;
  BevGeometry geometry;
  double timestamp = 0.0;

  friend bool operator==(const BevImage &, const BevImage &) = default;
};

/// Normalized BEV intensities in [0, 1].
struct BevImageF {
  Image<float> pixels;
  BevGeometry geometry;
  double timestamp = 0.0;
};

/// Per-pixel merged class ids (0 Void, 1 Ground, 2 Bushes, 3 Obstacles).
struct LabelImage {
  Image<std::uint8_t> classes;
  BevGeometry geometry;
  double timestamp = 0.0;

  MergedClass at(int r, int c) const {
    return static_cast<MergedClass>(classes(r, c));
  }
  friend bool operator==(const LabelImage &, const LabelImage &) = default;
};

}  // namespace ross
