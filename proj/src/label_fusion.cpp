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

#include "ross/label_fusion.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "ross/errors.hpp"
#include "ross/io.hpp"
#include "ross/parallel.hpp"

namespace ross {

MergedClass fuse_cell(const ClassCounts &counts) {
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) throw DegenerateError("fuse_cell: empty cell");
  MergedClass best = MergedClass::kVoid;
  std::uint32_t best_count = 0;
  for (int id = 1; id < kNumMergedClasses; ++id) {
    if (counts[id] > best_count) {
      best_count = counts[id];
      best = static_cast<MergedClass>(id);
    }
  }
  return best;
}

VoxelLabelMap::VoxelLabelMap(double voxel_size, const Vec3 &origin)
    : voxel_size_(voxel_size), origin_(origin) {
  if (!(voxel_size > 0.0) || !std::isfinite(voxel_size)) {
    throw ConfigError("voxel_size must be positive and finite");
  }
  if (!origin.allFinite()) throw ConfigError("voxel origin must be finite");
}

void VoxelLabelMap::add_point(const Vec3 &p, MergedClass c) {
  VoxelCell &cell = cells_[voxel_index(p, origin_, voxel_size_)];
  ++cell.counts[to_id(c)];
  cell.fused = fuse_cell(cell.counts);
}

void VoxelLabelMap::add_cloud(const LabeledCloud &cloud,
                              const ClassMap &class_map) {
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    add_point(cloud.points[i].xyz(), class_map.remap(cloud.labels[i]));
  }
}

void VoxelLabelMap::add_counts(const VoxelIndex &v, const ClassCounts &counts) {
  VoxelCell &cell = cells_[v];
  for (int id = 0; id < kNumMergedClasses; ++id) {
    const std::uint64_t sum =
        static_cast<std::uint64_t>(cell.counts[id]) + counts[id];
    if (sum > std::numeric_limits<std::uint32_t>::max()) {
      throw RangeError("voxel count overflow");
    }
    cell.counts[id] = static_cast<std::uint32_t>(sum);
  }
  cell.fused = fuse_cell(cell.counts);
}

void VoxelLabelMap::merge(const VoxelLabelMap &other) {
  if (other.voxel_size_ != voxel_size_ || other.origin_ != origin_) {
    throw ConfigError("cannot merge voxel maps with different grids");
  }
  for (const auto &[idx, cell] : other.cells_) add_counts(idx, cell.counts);
}

void VoxelLabelMap::prune(std::uint32_t min_points) {
  std::erase_if(cells_, [min_points](const auto &kv) {
    std::uint64_t n = 0;
    for (auto c : kv.second.counts) n += c;
    return n < min_points;
  });
}

std::uint64_t VoxelLabelMap::total_points() const {
  std::uint64_t n = 0;
  for (const auto &[idx, cell] : cells_) {
    for (auto c : cell.counts) n += c;
  }
  return n;
}

std::vector<std::pair<VoxelIndex, VoxelCell>> VoxelLabelMap::sorted_cells()
    const {
  std::vector<std::pair<VoxelIndex, VoxelCell>> out(cells_.begin(),
                                                     cells_.end());
  std::sort(out.begin(), out.end(),
            [](const auto &a, const auto &b) { return a.first < b.first; });
  return out;
}

bool operator==(const VoxelLabelMap &a, const VoxelLabelMap &b) {
  if (a.voxel_size_ != b.voxel_size_ || a.origin_ != b.origin_ ||
      a.cells_.size() != b.cells_.size()) {
    return false;
  }
  for (const auto &[idx, cell] : a.cells_) {
    const auto it = b.cells_.find(idx);
    if (it == b.cells_.end() || it->second.counts != cell.counts ||
        it->second.fused != cell.fused) {
      return false;
    }
  }
  return true;
}

LabeledCloud accumulate(std::span<const LabeledCloud> scans,
                        std::span<const StampedPose> traj) {
  LabeledCloud out;
  std::size_t total = 0;
  for (const auto &s : scans) total += s.size();
  out.points.reserve(total);
  out.labels.reserve(total);
  for (std::size_t s = 0; s < scans.size(); ++s) {
    const LabeledCloud &scan = scans[s];
    scan.validate();
    RigidTransform pose;
    try {
      pose = interpolate_pose(traj, scan.timestamp);
    } catch (const RangeError &e) {
      throw RangeError("scan " + std::to_string(s) + ": " + e.what());
    }
    for (std::size_t i = 0; i < scan.size(); ++i) {
      const PointXYZI &p = scan.points[i];
      const Vec3 w = apply_transform(pose, p.xyz());
      out.points.push_back({static_cast<float>(w.x()), static_cast<float>(w.y()),
                            static_cast<float>(w.z()), p.intensity});
    }
    out.labels.insert(out.labels.end(), scan.labels.begin(), scan.labels.end());
  }
  if (!scans.empty()) out.timestamp = scans.back().timestamp;
  return out;
}

VoxelLabelMap build_voxel_map(const LabeledCloud &cloud,
                              const ClassMap &class_map, double voxel_size,
                              const Vec3 &origin, int jobs) {
  VoxelLabelMap map(voxel_size, origin);
  cloud.validate();
  const std::size_t k = chunk_count(cloud.size(), jobs);
  if (k == 1) {
    map.add_cloud(cloud, class_map);
    return map;
  }
  std::vector<VoxelLabelMap> partial(k, VoxelLabelMap(voxel_size, origin));
  parallel_chunks(cloud.size(), jobs,
                  [&](std::size_t c, std::size_t begin, std::size_t end) {
                    for (std::size_t i = begin; i < end; ++i) {
                      partial[c].add_point(cloud.points[i].xyz(),
                                           class_map.remap(cloud.labels[i]));
                    }
                  });
  for (const auto &p : partial) map.merge(p);
  return map;
}

namespace {

constexpr std::size_t kHeaderBytes = 4 * sizeof(double);
constexpr std::size_t kRecordBytes = 3 * sizeof(std::int32_t) + 4 * sizeof(std::uint32_t);

template <class T>
void put(std::vector<std::uint8_t> &out, T v) {
  const auto *b = reinterpret_cast<const std::uint8_t *>(&v);
  out.insert(out.end(), b, b + sizeof(T));
}

template <class T>
T get(const std::uint8_t *p) {
  T v;
  std::memcpy(&v, p, sizeof(T));
  return v;
}

}  // namespace

std::vector<std::uint8_t> encode_voxel_map(const VoxelLabelMap &map) {
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderBytes + map.size() * kRecordBytes);
  put(out, map.voxel_size());
  put(out, map.origin().x());
  put(out, map.origin().y());
  put(out, map.origin().z());
  for (const auto &[idx, cell] : map.sorted_cells()) {
    put<std::int32_t>(out, idx.i);
    put<std::int32_t>(out, idx.j);
    put<std::int32_t>(out, idx.k);
    for (auto c : cell.counts) put<std::uint32_t>(out, c);
  }
  return out;
}

VoxelLabelMap decode_voxel_map(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderBytes) {
    throw FormatError("voxel map shorter than its " +
                      std::to_string(kHeaderBytes) + "-byte header");
  }
  const std::size_t body = bytes.size() - kHeaderBytes;
  if (body % kRecordBytes != 0) {
    throw FormatError("truncated voxel map: partial record at offset " +
                      std::to_string(kHeaderBytes + body - body % kRecordBytes));
  }
  const double size = get<double>(bytes.data());
  const Vec3 origin(get<double>(bytes.data() + 8), get<double>(bytes.data() + 16),
                    get<double>(bytes.data() + 24));
  if (!(size > 0.0) || !std::isfinite(size) || !origin.allFinite()) {
    throw FormatError("voxel map header has invalid grid parameters");
  }
  VoxelLabelMap map(size, origin);
  const std::size_t n = body / kRecordBytes;
  for (std::size_t r = 0; r < n; ++r) {
    const std::uint8_t *p = bytes.data() + kHeaderBytes + r * kRecordBytes;
    const VoxelIndex idx{get<std::int32_t>(p), get<std::int32_t>(p + 4),
                         get<std::int32_t>(p + 8)};
    ClassCounts counts;
    std::uint64_t total = 0;
    for (int c = 0; c < kNumMergedClasses; ++c) {
      counts[c] = get<std::uint32_t>(p + 12 + 4 * c);
      total += counts[c];
    }
    const std::string where =
        "voxel map record " + std::to_string(r) + " (offset " +
        std::to_string(kHeaderBytes + r * kRecordBytes) + ")";
    if (total == 0) throw FormatError(where + ": empty cell");
    if (map.cells().count(idx)) throw FormatError(where + ": duplicate index");
    map.add_counts(idx, counts);
  }
  return map;
}

void write_voxel_map(const VoxelLabelMap &map, const std::filesystem::path &path) {
  io::write_file_atomic(path, encode_voxel_map(map));
}

VoxelLabelMap read_voxel_map(const std::filesystem::path &path) {
  return decode_voxel_map(io::read_file(path));
}

}  // namespace ross
