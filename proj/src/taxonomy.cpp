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

#include "ross/taxonomy.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ross/errors.hpp"

#ifndef ROSS_DATA_DIR
#define ROSS_DATA_DIR "data"
#endif

namespace ross {

MergedClass merged_class_from_id(unsigned id) {
  if (id >= kNumMergedClasses) {
    throw FormatError("merged class id out of range: " + std::to_string(id));
  }
  return static_cast<MergedClass>(id);
}

std::string_view class_name(MergedClass c) {
  switch (c) {
    case MergedClass::kVoid:
      return "Void";
    case MergedClass::kGround:
      return "Ground";
    case MergedClass::kBushes:
      return "Bushes";
    case MergedClass::kObstacles:
      return "Obstacles";
  }
  return "Void";
}

std::optional<MergedClass> parse_merged_class(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return std::tolower(ch); });
  if (lower == "void") return MergedClass::kVoid;
  if (lower == "ground") return MergedClass::kGround;
  if (lower == "bushes" || lower == "bush") return MergedClass::kBushes;
  if (lower == "obstacles" || lower == "obstacle") {
    return MergedClass::kObstacles;
  }
  return std::nullopt;
}

std::array<std::uint8_t, 3> class_color(MergedClass c) {
  switch (c) {
    case MergedClass::kVoid:
      return {0, 0, 0};
    case MergedClass::kGround:
      return {139, 90, 43};
    case MergedClass::kBushes:
      return {34, 139, 34};
    case MergedClass::kObstacles:
      return {220, 20, 60};
  }
  return {0, 0, 0};
}

ClassMap ClassMap::parse(std::string_view text) {
  ClassMap map;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream fields(line);
    long long id = 0;
    std::string rellis_name, merged_name;
    if (!(fields >> id)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw FormatError("class map line " + std::to_string(line_no) +
                        ": expected `rellis_id rellis_name merged_name`");
    }
    std::string extra;
    if (!(fields >> rellis_name >> merged_name) || (fields >> extra)) {
      throw FormatError("class map line " + std::to_string(line_no) +
                        ": expected `rellis_id rellis_name merged_name`");
    }
    if (id < 0 || id > 0xFFFFFFFFll) {
      throw FormatError("class map line " + std::to_string(line_no) +
                        ": id out of range");
    }
    const auto merged = parse_merged_class(merged_name);
    if (!merged) {
      throw FormatError("class map line " + std::to_string(line_no) +
                        ": unknown merged class '" + merged_name + "'");
    }
    const auto key = static_cast<std::uint32_t>(id);
    if (map.table_.count(key)) {
      throw FormatError("class map line " + std::to_string(line_no) +
                        ": duplicate id " + std::to_string(id));
    }
    map.table_.emplace(key, Entry{rellis_name, *merged});
  }
  return map;
}

ClassMap ClassMap::load(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open class map " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::filesystem::path default_class_map_path() {
  if (const char *env = std::getenv("ROSS_CLASS_MAP"); env && *env) {
    return env;
  }
  return std::filesystem::path(ROSS_DATA_DIR) / "rellis3d_classes.txt";
}

const ClassMap &ClassMap::builtin() {
  static const ClassMap map = load(default_class_map_path());
  return map;
}

MergedClass ClassMap::remap(std::uint32_t rellis_id) const {
  const auto it = table_.find(rellis_id);
  return it == table_.end() ? MergedClass::kVoid : it->second.merged;
}

std::size_t ClassMap::count(MergedClass c) const {
  return static_cast<std::size_t>(
      std::count_if(table_.begin(), table_.end(),
                    [c](const auto &kv) { return kv.second.merged == c; }));
}

}  // namespace ross
