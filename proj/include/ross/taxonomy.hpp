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
 * \file taxonomy.hpp
 * \brief RELLIS-3D to four-class label consolidation.
 */
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace ross {

enum class MergedClass : std::uint8_t {
  kVoid = 0,
  kGround = 1,
  kBushes = 2,
  kObstacles = 3,
};

inline constexpr int kNumMergedClasses = 4;
inline constexpr std::array<MergedClass, 4> kAllMergedClasses = {
    MergedClass::kVoid, MergedClass::kGround, MergedClass::kBushes,
    MergedClass::kObstacles};

inline constexpr std::uint8_t to_id(MergedClass c) {
  return static_cast<std::uint8_t>(c);
}

/// Throws FormatError for ids outside 0..3.
MergedClass merged_class_from_id(unsigned id);

std::string_view class_name(MergedClass c);

/// Case-insensitive; accepts "void", "ground", "bushes"/"bush",
/// "obstacles"/"obstacle".
std::optional<MergedClass> parse_merged_class(std::string_view name);

/// Column-collapse priority: Obstacles > Bushes > Ground > Void.
inline constexpr int projection_priority(MergedClass c) {
  return static_cast<int>(c);
}

/// RGB display color.
std::array<std::uint8_t, 3> class_color(MergedClass c);

/**
 * \brief Lookup from RELLIS-3D ids to merged classes.
 *
 * Total: ids missing from the table resolve to Void.
 */
class ClassMap {
 public:
  struct Entry {
    std::string rellis_name;
    MergedClass merged = MergedClass::kVoid;
  };

  ClassMap() = default;

  /// Parses `rellis_id rellis_name merged_name` lines ('#' comments).
  static ClassMap load(const std::filesystem::path &path);
  static ClassMap parse(std::string_view text);
  /// Mapping file shipped with the library.
  static const ClassMap &builtin();

  MergedClass remap(std::uint32_t rellis_id) const;

  const std::map<std::uint32_t, Entry> &entries() const { return table_; }
  std::size_t count(MergedClass c) const;

 private:
  std::map<std::uint32_t, Entry> table_;
};

/// Default location of the shipped RELLIS-3D mapping file.
std::filesystem::path default_class_map_path();

}  // namespace ross
