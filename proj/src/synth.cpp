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

#include "ross/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <set>

#include "ross/config.hpp"
#include "ross/errors.hpp"
#include "ross/io.hpp"

namespace ross {
namespace {

constexpr double kEps = 1e-9;

struct LocalBox {
  Vec3 center;  // ground point under the box center
  double cos_yaw, sin_yaw;
  double hl, hw;  // half length / width
  double z_bottom, z_top;

  Vec2 to_local(double x, double y) const {
    const double dx = x - center.x(), dy = y - center.y();
    return {cos_yaw * dx + sin_yaw * dy, -sin_yaw * dx + cos_yaw * dy};
  }
  bool footprint_contains(double x, double y) const {
    const Vec2 l = to_local(x, y);
    return std::abs(l.x()) <= hl && std::abs(l.y()) <= hw;
  }
};

LocalBox make_box(const BoxSpec &b, double ground) {
  LocalBox out;
  out.center = {b.center.x(), b.center.y(), ground};
  out.cos_yaw = std::cos(b.yaw);
  out.sin_yaw = std::sin(b.yaw);
  out.hl = 0.5 * b.length;
  out.hw = 0.5 * b.width;
  // Sunk below the surface so the slope never opens a gap under it.
  out.z_bottom = ground - 0.5;
  out.z_top = ground + b.height;
  return out;
}

void require(bool ok, const std::string &what) {
  if (!ok) throw ConfigError("scene spec: " + what);
}

IntensityModel parse_intensity(const KeyValueConfig::Section &s,
                               const IntensityModel &fallback) {
  const std::string model = get_string_or(&s, "model", "");
  if (model.empty()) return fallback;
  if (model == "gaussian") {
    return IntensityModel::gaussian(get_double(s, "mean"), get_double(s, "std"));
  }
  if (model == "uniform") {
    return IntensityModel::uniform(get_double(s, "low"), get_double(s, "high"));
  }
  throw ConfigError("[" + s.name + "] model must be gaussian or uniform");
}

void check_keys(const KeyValueConfig::Section &s,
                std::initializer_list<std::string_view> allowed) {
  for (const auto &[k, v] : s.values) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
      throw ConfigError("scene spec: unknown key [" + s.name + "] " + k);
    }
  }
}

std::string numbered(const char *pattern, std::size_t i) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), pattern, i);
  return buf;
}

}  // namespace

void SceneSpec::validate() const {
  require(std::isfinite(extent) && extent > 0.0, "extent must be > 0");
  require(n_scans >= 1, "scans must be >= 1");
  require(scan_period > 0.0, "period must be > 0");
  require(radar_time_offset >= 0.0 && radar_time_offset <= scan_period,
          "radar_offset must lie in [0, period]");
  require(lidar_height > 0.0, "lidar height must be > 0");
  require(lidar_range > 0.0, "lidar range must be > 0");
  require(lidar_spacing > 0.0, "lidar spacing must be > 0");
  require(n_azimuth >= 1 && n_range_bins >= 1, "radar size must be >= 1");
  require(range_resolution > 0.0, "radar range_resolution must be > 0");
  require(gt_geometry.rows >= 1 && gt_geometry.cols >= 1 &&
              gt_geometry.meters_per_pixel > 0.0,
          "gt raster must be non-empty with mpp > 0");
  require(gt_band.z_min < gt_band.z_max, "gt z_min must be < z_max");
  require(coverage_margin >= 0.0, "coverage_margin must be >= 0");
  for (const auto &b : bushes) {
    require(b.radius > 0.0 && b.height > 0.0, "bush radius and height must be > 0");
  }
  for (const auto &b : boxes) {
    require(b.length > 0.0 && b.width > 0.0 && b.height > 0.0,
            "box dimensions must be > 0");
  }
  for (const auto &m : intensity) {
    if (m.kind == IntensityModel::Kind::kGaussian) {
      require(m.b >= 0.0, "intensity std must be >= 0");
    } else {
      require(m.a <= m.b, "intensity low must be <= high");
    }
  }
  // The analytic ground truth treats radar-frame z as world z.
  const Vec3 up = radar_mount.rotation_matrix().col(2);
  require(std::abs(up.z() - 1.0) < 1e-12, "radar mount may only rotate about z");
}

SceneSpec parse_scene_spec(std::string_view text) {
  const auto cfg = KeyValueConfig::parse(text);
  SceneSpec spec;
  for (const auto &s : cfg.sections()) {
    const auto *sp = &s;
    if (s.name.empty()) {
      check_keys(s, {"seed", "extent"});
      const auto seed = get_int_or(sp, "seed", 1);
      require(seed >= 0, "seed must be >= 0");
      spec.seed = static_cast<std::uint64_t>(seed);
      spec.extent = get_double_or(sp, "extent", spec.extent);
    } else if (s.name == "ground") {
      check_keys(s, {"z0", "slope"});
      spec.ground_z0 = get_double_or(sp, "z0", 0.0);
      if (s.values.count("slope")) {
        const auto v = get_doubles(s, "slope", 2);
        spec.ground_slope_x = v[0];
        spec.ground_slope_y = v[1];
      }
    } else if (s.name.starts_with("bush.")) {
      check_keys(s, {"center", "radius", "height"});
      const auto c = get_doubles(s, "center", 2);
      spec.bushes.push_back(
          {{c[0], c[1]}, get_double(s, "radius"), get_double(s, "height")});
    } else if (s.name.starts_with("box.")) {
      check_keys(s, {"center", "size", "yaw"});
      const auto c = get_doubles(s, "center", 2);
      const auto d = get_doubles(s, "size", 3);
      spec.boxes.push_back({{c[0], c[1]}, get_double_or(sp, "yaw", 0.0), d[0], d[1], d[2]});
    } else if (s.name == "trajectory") {
      check_keys(s, {"start", "velocity", "yaw", "yaw_rate", "scans", "period",
                     "radar_offset"});
      if (s.values.count("start")) {
        const auto v = get_doubles(s, "start", 2);
        spec.start = {v[0], v[1]};
      }
      if (s.values.count("velocity")) {
        const auto v = get_doubles(s, "velocity", 2);
        spec.velocity = {v[0], v[1]};
      }
      spec.start_yaw = get_double_or(sp, "yaw", spec.start_yaw);
      spec.yaw_rate = get_double_or(sp, "yaw_rate", spec.yaw_rate);
      spec.n_scans = static_cast<int>(get_int_or(sp, "scans", spec.n_scans));
      spec.scan_period = get_double_or(sp, "period", spec.scan_period);
      spec.radar_time_offset =
          get_double_or(sp, "radar_offset", spec.radar_time_offset);
    } else if (s.name == "lidar") {
      check_keys(s, {"height", "range", "spacing"});
      spec.lidar_height = get_double_or(sp, "height", spec.lidar_height);
      spec.lidar_range = get_double_or(sp, "range", spec.lidar_range);
      spec.lidar_spacing = get_double_or(sp, "spacing", spec.lidar_spacing);
    } else if (s.name == "radar") {
      check_keys(s, {"mount", "n_azimuth", "n_range_bins", "range_resolution"});
      if (s.values.count("mount")) {
        const auto v = get_doubles(s, "mount", 4);
        spec.radar_mount = RigidTransform::from_yaw(v[3], {v[0], v[1], v[2]});
      }
      spec.n_azimuth = static_cast<int>(get_int_or(sp, "n_azimuth", spec.n_azimuth));
      spec.n_range_bins =
          static_cast<int>(get_int_or(sp, "n_range_bins", spec.n_range_bins));
      spec.range_resolution =
          get_double_or(sp, "range_resolution", spec.range_resolution);
    } else if (s.name.starts_with("intensity.")) {
      check_keys(s, {"model", "mean", "std", "low", "high"});
      const auto c = parse_merged_class(std::string_view(s.name).substr(10));
      require(c.has_value(), "unknown class in [" + s.name + "]");
      spec.intensity[to_id(*c)] = parse_intensity(s, spec.intensity[to_id(*c)]);
    } else if (s.name == "gt") {
      check_keys(s, {"rows", "cols", "mpp", "z_min", "z_max", "coverage_margin"});
      const int rows = static_cast<int>(get_int_or(sp, "rows", spec.gt_geometry.rows));
      const int cols = static_cast<int>(get_int_or(sp, "cols", spec.gt_geometry.cols));
      spec.gt_geometry = BevGeometry::centered(
          rows, cols, get_double_or(sp, "mpp", spec.gt_geometry.meters_per_pixel));
      spec.gt_band.z_min = get_double_or(sp, "z_min", spec.gt_band.z_min);
      spec.gt_band.z_max = get_double_or(sp, "z_max", spec.gt_band.z_max);
      spec.coverage_margin = get_double_or(sp, "coverage_margin", spec.coverage_margin);
    } else if (s.name == "labels") {
      check_keys(s, {"ground", "bushes", "obstacles"});
      spec.ground_label = static_cast<std::uint32_t>(get_int_or(sp, "ground", spec.ground_label));
      spec.bush_label = static_cast<std::uint32_t>(get_int_or(sp, "bushes", spec.bush_label));
      spec.obstacle_label =
          static_cast<std::uint32_t>(get_int_or(sp, "obstacles", spec.obstacle_label));
    } else {
      throw ConfigError("scene spec: unknown section [" + s.name + "]");
    }
  }
  spec.validate();
  return spec;
}

SceneSpec load_scene_spec(const std::filesystem::path &path) {
  if (!std::filesystem::exists(path)) {
    throw ConfigError("scene spec not found: " + path.string());
  }
  const auto bytes = io::read_file(path);
  return parse_scene_spec(
      std::string_view(reinterpret_cast<const char *>(bytes.data()), bytes.size()));
}

SceneGeometry::SceneGeometry(const SceneSpec &spec) : spec_(spec) {}

bool SceneGeometry::in_extent(double x, double y) const {
  return std::abs(x) <= spec_.extent && std::abs(y) <= spec_.extent;
}

double SceneGeometry::ground_z(double x, double y) const {
  return spec_.ground_z0 + spec_.ground_slope_x * x + spec_.ground_slope_y * y;
}

std::optional<RayHit> SceneGeometry::top_surface(double x, double y) const {
  if (!in_extent(x, y)) return std::nullopt;
  RayHit best{0.0, {x, y, ground_z(x, y)}, MergedClass::kGround};
  for (const auto &b : spec_.bushes) {
    const double dx = x - b.center.x(), dy = y - b.center.y();
    const double rho2 = (dx * dx + dy * dy) / (b.radius * b.radius);
    if (rho2 >= 1.0) continue;
    const double z = ground_z(b.center.x(), b.center.y()) + b.height * std::sqrt(1.0 - rho2);
    if (z > best.point.z()) best = {0.0, {x, y, z}, MergedClass::kBushes};
  }
  for (const auto &spec_box : spec_.boxes) {
    const auto box = make_box(spec_box, ground_z(spec_box.center.x(), spec_box.center.y()));
    if (box.footprint_contains(x, y) && box.z_top > best.point.z()) {
      best = {0.0, {x, y, box.z_top}, MergedClass::kObstacles};
    }
  }
  return best;
}

std::optional<RayHit> SceneGeometry::cast(const Vec3 &o, const Vec3 &d,
                                          double max_t) const {
  std::optional<RayHit> best;
  const auto consider = [&](double t, MergedClass c) {
    if (!(t > kEps) || t > max_t) return;
    if (best && t >= best->t) return;
    best = RayHit{t, o + t * d, c};
  };

  // Ground plane z = z0 + sx x + sy y, clipped to the extent.
  const double denom = d.z() - spec_.ground_slope_x * d.x() - spec_.ground_slope_y * d.y();
  if (std::abs(denom) > 1e-15) {
    const double t = -(o.z() - ground_z(o.x(), o.y())) / denom;
    const Vec3 p = o + t * d;
    if (in_extent(p.x(), p.y())) consider(t, MergedClass::kGround);
  }

  for (const auto &b : spec_.bushes) {
    const double zc = ground_z(b.center.x(), b.center.y());
    const Vec3 scale(b.radius, b.radius, b.height);
    const Vec3 q = (o - Vec3(b.center.x(), b.center.y(), zc)).cwiseQuotient(scale);
    const Vec3 e = d.cwiseQuotient(scale);
    const double A = e.squaredNorm();
    const double B = 2.0 * q.dot(e);
    const double C = q.squaredNorm() - 1.0;
    const double disc = B * B - 4.0 * A * C;
    if (disc < 0.0) continue;
    const double t0 = (-B - std::sqrt(disc)) / (2.0 * A);
    if ((o + t0 * d).z() >= zc) consider(t0, MergedClass::kBushes);
  }

  for (const auto &spec_box : spec_.boxes) {
    const auto box = make_box(spec_box, ground_z(spec_box.center.x(), spec_box.center.y()));
    const Vec2 lo = box.to_local(o.x(), o.y());
    const Vec3 lo3(lo.x(), lo.y(), o.z());
    const Vec3 ld(box.cos_yaw * d.x() + box.sin_yaw * d.y(),
                  -box.sin_yaw * d.x() + box.cos_yaw * d.y(), d.z());
    const double mins[3] = {-box.hl, -box.hw, box.z_bottom};
    const double maxs[3] = {box.hl, box.hw, box.z_top};
    double t_near = -std::numeric_limits<double>::infinity();
    double t_far = std::numeric_limits<double>::infinity();
    bool miss = false;
    for (int k = 0; k < 3 && !miss; ++k) {
      if (std::abs(ld[k]) < 1e-15) {
        if (lo3[k] < mins[k] || lo3[k] > maxs[k]) miss = true;
        continue;
      }
      double ta = (mins[k] - lo3[k]) / ld[k];
      double tb = (maxs[k] - lo3[k]) / ld[k];
      if (ta > tb) std::swap(ta, tb);
      t_near = std::max(t_near, ta);
      t_far = std::min(t_far, tb);
      if (t_near > t_far) miss = true;
    }
    if (!miss) consider(t_near, MergedClass::kObstacles);
  }
  return best;
}

MergedClass SceneGeometry::column_class(double x, double y, double z_lo,
                                        double z_hi) const {
  if (!in_extent(x, y)) return MergedClass::kVoid;
  const double zg = ground_z(x, y);
  const auto meets = [&](double a, double b) { return a <= z_hi && b >= z_lo; };
  for (const auto &spec_box : spec_.boxes) {
    const auto box = make_box(spec_box, ground_z(spec_box.center.x(), spec_box.center.y()));
    if (box.footprint_contains(x, y) && box.z_top > zg &&
        meets(std::max(box.z_bottom, zg), box.z_top)) {
      return MergedClass::kObstacles;
    }
  }
  for (const auto &b : spec_.bushes) {
    const double dx = x - b.center.x(), dy = y - b.center.y();
    const double rho2 = (dx * dx + dy * dy) / (b.radius * b.radius);
    if (rho2 >= 1.0) continue;
    const double zc = ground_z(b.center.x(), b.center.y());
    const double top = zc + b.height * std::sqrt(1.0 - rho2);
    if (top > zg && meets(std::max(zc, zg), top)) return MergedClass::kBushes;
  }
  return meets(zg, zg) ? MergedClass::kGround : MergedClass::kVoid;
}

MergedClass SceneGeometry::footprint_class(const Vec2 &center, const Vec2 &u,
                                           const Vec2 &v, double half, double z_lo,
                                           double z_hi) const {
  if (!in_extent(center.x(), center.y())) return MergedClass::kVoid;
  const auto meets = [&](double a, double b) { return a <= z_hi && b >= z_lo; };
  for (const auto &spec_box : spec_.boxes) {
    const auto box = make_box(spec_box, ground_z(spec_box.center.x(), spec_box.center.y()));
    if (!meets(box.z_bottom, box.z_top)) continue;
    // Separating-axis test between two oriented rectangles.
    const Vec2 bu(box.cos_yaw, box.sin_yaw), bv(-box.sin_yaw, box.cos_yaw);
    const Vec2 d = box.center.head<2>() - center;
    bool separated = false;
    for (const Vec2 &n : {u, v, bu, bv}) {
      const double ra = half * (std::abs(u.dot(n)) + std::abs(v.dot(n)));
      const double rb = box.hl * std::abs(bu.dot(n)) + box.hw * std::abs(bv.dot(n));
      if (std::abs(d.dot(n)) > ra + rb) {
        separated = true;
        break;
      }
    }
    if (!separated) return MergedClass::kObstacles;
  }
  for (const auto &b : spec_.bushes) {
    const double zc = ground_z(b.center.x(), b.center.y());
    if (!meets(zc, zc + b.height)) continue;
    const Vec2 d = b.center - center;
    const double du = std::clamp(d.dot(u), -half, half);
    const double dv = std::clamp(d.dot(v), -half, half);
    if ((d - du * u - dv * v).squaredNorm() < b.radius * b.radius) {
      return MergedClass::kBushes;
    }
  }
  const double zg = ground_z(center.x(), center.y());
  return meets(zg, zg) ? MergedClass::kGround : MergedClass::kVoid;
}

double SynthRng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double SynthRng::normal() {
  if (spare_) {
    const double v = *spare_;
    spare_.reset();
    return v;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(phi);
  return r * std::cos(phi);
}

std::uint16_t SynthRng::draw(const IntensityModel &m) {
  const double v = m.kind == IntensityModel::Kind::kGaussian
                       ? m.a + m.b * normal()
                       : m.a + (m.b - m.a) * uniform();
  return static_cast<std::uint16_t>(std::clamp(std::round(v), 0.0, 65535.0));
}

SynthScene generate_scene(const SceneSpec &spec) {
  spec.validate();
  const SceneGeometry geo(spec);
  SynthScene out;
  out.extrinsic = spec.extrinsic();

  const double half = 0.5 * spec.scan_period;
  for (int j = 0; j <= 2 * spec.n_scans; ++j) {
    const double t = j * half;
    const Vec2 xy = spec.start + t * spec.velocity;
    const Vec3 pos(xy.x(), xy.y(), geo.ground_z(xy.x(), xy.y()) + spec.lidar_height);
    out.trajectory.push_back(
        {t, RigidTransform::from_yaw(spec.start_yaw + spec.yaw_rate * t, pos)});
  }

  const auto label_of = [&](MergedClass c) {
    switch (c) {
      case MergedClass::kGround:
        return spec.ground_label;
      case MergedClass::kBushes:
        return spec.bush_label;
      case MergedClass::kObstacles:
        return spec.obstacle_label;
      default:
        return 0u;
    }
  };

  std::vector<Vec3> lidar_origins;
  for (int s = 0; s < spec.n_scans; ++s) {
    const double t = s * spec.scan_period;
    const RigidTransform L = interpolate_pose(out.trajectory, t);
    const RigidTransform L_inv = L.inverse();
    const Vec3 o = L.translation();
    lidar_origins.push_back(o);
    LabeledCloud cloud;
    cloud.timestamp = t;
    const double sp = spec.lidar_spacing, range = spec.lidar_range;
    const long long i0 = static_cast<long long>(std::ceil((o.x() - range) / sp));
    const long long i1 = static_cast<long long>(std::floor((o.x() + range) / sp));
    const long long j0 = static_cast<long long>(std::ceil((o.y() - range) / sp));
    const long long j1 = static_cast<long long>(std::floor((o.y() + range) / sp));
    for (long long i = i0; i <= i1; ++i) {
      for (long long j = j0; j <= j1; ++j) {
        const double gx = i * sp, gy = j * sp;
        const double hx = gx - o.x(), hy = gy - o.y();
        if (hx * hx + hy * hy > range * range) continue;
        const auto top = geo.top_surface(gx, gy);
        if (!top) continue;
        const Vec3 d = top->point - o;
        const double len = d.norm();
        auto hit = geo.cast(o, d / len, len + 1e-6);
        if (!hit) hit = RayHit{len, top->point, top->cls};
        const Vec3 p = L_inv * hit->point;
        const float remission = 0.25f * static_cast<float>(to_id(hit->cls));
        cloud.points.push_back({static_cast<float>(p.x()), static_cast<float>(p.y()),
                                static_cast<float>(p.z()), remission});
        cloud.labels.push_back(label_of(hit->cls));
      }
    }
    out.scans.push_back(std::move(cloud));
  }

  SynthRng rng(spec.seed);
  const double z_band_lo = spec.gt_band.z_min, z_band_hi = spec.gt_band.z_max;
  const double vis_range = std::max(0.0, spec.lidar_range - spec.coverage_margin);
  for (int k = 0; k < spec.n_scans; ++k) {
    const double t = k * spec.scan_period + spec.radar_time_offset;
    const RigidTransform radar_world =
        radar_pose_in_world(interpolate_pose(out.trajectory, t), out.extrinsic);

    RadarFrame frame;
    frame.range_resolution = spec.range_resolution;
    frame.azimuth_0_direction = 0.0;
    frame.timestamp = t;
    frame.energy = Image<std::uint16_t>(spec.n_azimuth, spec.n_range_bins);
    for (int a = 0; a < spec.n_azimuth; ++a) {
      const double theta = frame.azimuth_of(a);
      const double c = std::cos(theta), s = std::sin(theta);
      bool behind_obstacle = false;
      for (int b = 0; b < spec.n_range_bins; ++b) {
        const double r = b * spec.range_resolution;
        const Vec3 w = radar_world * Vec3(r * c, r * s, 0.0);
        const auto top = geo.top_surface(w.x(), w.y());
        MergedClass cls = top ? top->cls : MergedClass::kVoid;
        if (cls == MergedClass::kObstacles) {
          behind_obstacle = true;
        } else if (behind_obstacle) {
          cls = MergedClass::kVoid;
        }
        frame.energy(a, b) = rng.draw(spec.intensity[to_id(cls)]);
      }
    }
    out.radar_frames.push_back(std::move(frame));

    LabelImage gt;
    gt.geometry = spec.gt_geometry;
    gt.timestamp = t;
    gt.classes = Image<std::uint8_t>(gt.geometry.rows, gt.geometry.cols, 0);
    const double rz = radar_world.translation().z();
    const Mat3 rot = radar_world.rotation_matrix();
    const Vec2 u = rot.col(0).head<2>().normalized();
    const Vec2 v = rot.col(1).head<2>().normalized();
    const double half = 0.5 * gt.geometry.meters_per_pixel;
    for (int r = 0; r < gt.geometry.rows; ++r) {
      for (int c = 0; c < gt.geometry.cols; ++c) {
        const Vec2 xy = gt.geometry.pixel_center(r, c);
        const Vec3 w = radar_world * Vec3(xy.x(), xy.y(), 0.0);
        const MergedClass cls = geo.footprint_class(w.head<2>(), u, v, half,
                                                    z_band_lo + rz, z_band_hi + rz);
        if (cls == MergedClass::kVoid) continue;
        const auto top = geo.top_surface(w.x(), w.y());
        bool visible = false;
        for (const Vec3 &o : lidar_origins) {
          const double hx = top->point.x() - o.x(), hy = top->point.y() - o.y();
          if (hx * hx + hy * hy > vis_range * vis_range) continue;
          const Vec3 d = top->point - o;
          const double len = d.norm();
          const auto hit = geo.cast(o, d / len, len + 1e-6);
          if (!hit || hit->t >= len - 1e-6) {
            visible = true;
            break;
          }
        }
        if (visible) gt.classes(r, c) = to_id(cls);
      }
    }
    out.gt_labels.push_back(std::move(gt));
  }
  return out;
}

void write_scene(const SynthScene &scene, const SceneSpec &spec,
                 const std::filesystem::path &dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "scans");
  fs::create_directories(dir / "radar");
  fs::create_directories(dir / "gt");
  for (std::size_t i = 0; i < scene.scans.size(); ++i) {
    io::write_cloud(scene.scans[i], dir / "scans" / numbered("scan_%06zu.bin", i));
  }
  for (std::size_t i = 0; i < scene.radar_frames.size(); ++i) {
    io::write_radar_frame(scene.radar_frames[i],
                          dir / "radar" / numbered("frame_%06zu.png", i));
    io::write_label_image(scene.gt_labels[i],
                          dir / "gt" / numbered("frame_%06zu_label.png", i));
  }
  io::write_trajectory(scene.trajectory, dir / "trajectory.txt");
  io::write_calibration({scene.extrinsic, 0.0}, dir / "calibration.txt");

  const auto &g = spec.gt_geometry;
  std::string cfg;
  cfg += "# Generated with the scene; paths are relative to this file.\n";
  cfg += "[paths]\nscans = scans\ntrajectory = trajectory.txt\nradar = radar\n";
  cfg += "calibration = calibration.txt\ngt = gt\noutput = out\n\n";
  // Slightly coarser than the sample grid so no voxel column is skipped.
  cfg += "[fusion]\nvoxel_size = " + io::format_double(1.25 * spec.lidar_spacing) + "\n\n";
  cfg += "[bev]\nrows = " + std::to_string(g.rows) + "\ncols = " +
         std::to_string(g.cols) + "\nmpp = " + io::format_double(g.meters_per_pixel) +
         "\n\n";
  cfg += "[projection]\nz_min = " + io::format_double(spec.gt_band.z_min) +
         "\nz_max = " + io::format_double(spec.gt_band.z_max) + "\nchannels = 1\n\n";
  cfg += "[eval]\nmerge = cls3\n";
  io::write_text_atomic(dir / "pipeline.cfg", cfg);
}

}  // namespace ross
