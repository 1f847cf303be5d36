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

#include "ross/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <tuple>

#include <Eigen/Dense>

#include "ross/errors.hpp"
#include "ross/io.hpp"

namespace ross {
namespace {

Mat3 tilt_rotation(const PlanarFitOptions &opts) {
  return (Eigen::AngleAxisd(opts.fixed_pitch, Vec3::UnitY()) *
          Eigen::AngleAxisd(opts.fixed_roll, Vec3::UnitX()))
      .toRotationMatrix();
}

Eigen::Matrix2d rot2(double yaw) {
  Eigen::Matrix2d r;
  r << std::cos(yaw), -std::sin(yaw), std::sin(yaw), std::cos(yaw);
  return r;
}

auto as_tuple(const TargetCorrespondence &c) {
  return std::make_tuple(c.lidar_point.x(), c.lidar_point.y(),
                         c.lidar_point.z(), c.radar_point.x(),
                         c.radar_point.y());
}

void check_not_collinear(std::span<const TargetCorrespondence> sorted) {
  Vec2 mean = Vec2::Zero();
  for (const auto &c : sorted) mean += c.lidar_point.head<2>();
  mean /= static_cast<double>(sorted.size());
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  for (const auto &c : sorted) {
    const Vec2 d = c.lidar_point.head<2>() - mean;
    cov += d * d.transpose();
  }
  cov /= static_cast<double>(sorted.size());
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(cov);
  const double lo = eig.eigenvalues()(0);
  const double hi = eig.eigenvalues()(1);
  if (!(hi > 1e-18) || lo <= 1e-10 * hi) {
    std::ostringstream os;
    os << "lidar targets are collinear in xy (covariance eigenvalues " << lo
       << ", " << hi << ")";
    throw DegenerateError(os.str());
  }
}

}  // namespace

RigidTransform planar_extrinsic(double x, double y, double yaw,
                                const PlanarFitOptions &opts) {
  const Eigen::Quaterniond q =
      Eigen::AngleAxisd(yaw, Vec3::UnitZ()) *
      Eigen::AngleAxisd(opts.fixed_pitch, Vec3::UnitY()) *
      Eigen::AngleAxisd(opts.fixed_roll, Vec3::UnitX());
  return {q, Vec3(x, y, opts.fixed_z)};
}

double planar_residual_sum(std::span<const TargetCorrespondence> pairs,
                           const RigidTransform &extrinsic) {
  double sum = 0.0;
  for (const auto &c : pairs) {
    const Vec3 p = apply_transform(extrinsic, c.lidar_point);
    sum += (p.head<2>() - c.radar_point).squaredNorm();
  }
  return sum;
}

CalibrationResult estimate_extrinsics(std::span<const TargetCorrespondence> pairs,
                                      const PlanarFitOptions &opts) {
  if (pairs.size() < 3) {
    throw InsufficientDataError("extrinsic fit needs at least 3 target pairs, got " +
                                std::to_string(pairs.size()));
  }
  for (const auto &c : pairs) {
    if (!c.lidar_point.allFinite() || !c.radar_point.allFinite()) {
      throw DegenerateError("non-finite target coordinate");
    }
  }
  // Canonical order makes every floating-point sum order-independent.
  std::vector<TargetCorrespondence> sorted(pairs.begin(), pairs.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const auto &a, const auto &b) { return as_tuple(a) < as_tuple(b); });
  check_not_collinear(sorted);

  const Mat3 tilt = tilt_rotation(opts);
  const double n = static_cast<double>(sorted.size());
  std::vector<Vec2> src(sorted.size());
  Vec2 src_mean = Vec2::Zero(), dst_mean = Vec2::Zero();
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    src[i] = (tilt * sorted[i].lidar_point).head<2>();
    src_mean += src[i];
    dst_mean += sorted[i].radar_point;
  }
  src_mean /= n;
  dst_mean /= n;

  // 2D Procrustes: yaw maximizing sum of dot products of centered pairs.
  double s_cos = 0.0, s_sin = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const Vec2 a = src[i] - src_mean;
    const Vec2 b = sorted[i].radar_point - dst_mean;
    s_cos += a.dot(b);
    s_sin += a.x() * b.y() - a.y() * b.x();
  }
  double yaw = std::atan2(s_sin, s_cos);
  Vec2 t = dst_mean - rot2(yaw) * src_mean;

  // Gauss-Newton over (x, y, yaw).
  int iterations = 0;
  for (; iterations < opts.max_iterations; ++iterations) {
    const Eigen::Matrix2d r = rot2(yaw);
    Eigen::Matrix2d dr;
    dr << -std::sin(yaw), -std::cos(yaw), std::cos(yaw), -std::sin(yaw);
    Eigen::Matrix3d jtj = Eigen::Matrix3d::Zero();
    Vec3 jte = Vec3::Zero();
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      const Vec2 e = r * src[i] + t - sorted[i].radar_point;
      Eigen::Matrix<double, 2, 3> j;
      j.leftCols<2>().setIdentity();
      j.col(2) = dr * src[i];
      jtj += j.transpose() * j;
      jte += j.transpose() * e;
    }
    const Vec3 step = -jtj.ldlt().solve(jte);
    if (!step.allFinite()) throw DegenerateError("Gauss-Newton step diverged");
    t += step.head<2>();
    yaw += step(2);
    if (step.norm() < opts.step_tolerance) {
      ++iterations;
      break;
    }
  }
  yaw = std::remainder(yaw, 2.0 * M_PI);

  CalibrationResult result;
  result.extrinsic = planar_extrinsic(t.x(), t.y(), yaw, opts);
  result.iterations = iterations;
  double sq = 0.0;
  for (const auto &c : sorted) {
    sq += (apply_transform(result.extrinsic, c.lidar_point).head<2>() -
           c.radar_point)
              .squaredNorm();
  }
  result.rms_residual = std::sqrt(sq / n);
  result.per_target_residuals.reserve(pairs.size());
  for (const auto &c : pairs) {
    result.per_target_residuals.push_back(
        (apply_transform(result.extrinsic, c.lidar_point).head<2>() -
         c.radar_point)
            .norm());
  }
  return result;
}

std::vector<TargetCorrespondence> parse_correspondences(std::string_view text) {
  std::vector<TargetCorrespondence> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<double> v;
    std::string tok;
    while (fields >> tok) {
      const auto d = io::parse_double(tok);
      if (!d || !std::isfinite(*d)) {
        throw FormatError("pairs line " + std::to_string(line_no) +
                          ": bad number '" + tok + "'");
      }
      v.push_back(*d);
    }
    if (v.empty()) continue;
    if (v.size() != 5) {
      throw FormatError("pairs line " + std::to_string(line_no) +
                        ": expected `lx ly lz rx ry`");
    }
    TargetCorrespondence c{Vec3(v[0], v[1], v[2]), Vec2(v[3], v[4])};
    if (!(c.radar_point.norm() > 0.0)) {
      throw FormatError("pairs line " + std::to_string(line_no) +
                        ": radar target at zero range");
    }
    out.push_back(c);
  }
  return out;
}

std::vector<TargetCorrespondence> read_correspondences(
    const std::filesystem::path &path) {
  const io::Bytes b = io::read_file(path);
  return parse_correspondences(
      std::string_view(reinterpret_cast<const char *>(b.data()), b.size()));
}

std::vector<Vec2> detect_reflectors(const RadarFrame &frame,
                                    std::uint16_t min_intensity,
                                    double min_separation) {
  if (!(min_separation > 0.0)) {
    throw ConfigError("min_separation must be positive");
  }
  struct Peak {
    std::uint16_t value;
    int row;
    int col;
  };
  std::vector<Peak> peaks;
  const int na = frame.n_azimuth();
  const int nr = frame.n_range_bins();
  for (int a = 0; a < na; ++a) {
    for (int b = 0; b < nr; ++b) {
      const std::uint16_t v = frame.energy(a, b);
      if (v < min_intensity || v == 0) continue;
      bool is_max = true;
      for (int da = -1; da <= 1 && is_max; ++da) {
        const int aa = ((a + da) % na + na) % na;
        for (int db = -1; db <= 1; ++db) {
          const int bb = b + db;
          if ((da == 0 && db == 0) || bb < 0 || bb >= nr) continue;
          if (aa == a && db == 0) continue;
          if (frame.energy(aa, bb) > v) {
            is_max = false;
            break;
          }
        }
      }
      if (is_max) peaks.push_back({v, a, b});
    }
  }
  // Strongest first; ties by (row, col) for determinism.
  std::stable_sort(peaks.begin(), peaks.end(),
                   [](const Peak &x, const Peak &y) { return x.value > y.value; });
  std::vector<Vec2> accepted;
  for (const auto &p : peaks) {
    const double range = p.col * frame.range_resolution;
    const double az = frame.azimuth_of(p.row);
    const Vec2 xy(range * std::cos(az), range * std::sin(az));
    const bool suppressed =
        std::any_of(accepted.begin(), accepted.end(), [&](const Vec2 &q) {
          return (q - xy).norm() < min_separation;
        });
    if (!suppressed) accepted.push_back(xy);
  }
  return accepted;
}

}  // namespace ross
