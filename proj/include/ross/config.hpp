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
 * \file config.hpp
 * \brief `key = value` files with `[section]` headers and '#' comments.
 */
#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ross {

class KeyValueConfig {
 public:
  struct Section {
    std::string name;
    std::map<std::string, std::string> values;
  };

  static KeyValueConfig parse(std::string_view text);
  static KeyValueConfig load(const std::filesystem::path &path);

  /// Sections in file order; keys before the first header go to "".
  const std::vector<Section> &sections() const { return sections_; }
  const Section *find(std::string_view section) const;
  /// Sections named `prefix` or starting with `prefix.`, in file order.
  std::vector<const Section *> with_prefix(std::string_view prefix) const;

  std::optional<std::string> get(std::string_view section,
                                 std::string_view key) const;
  void set(std::string_view section, std::string_view key, std::string value);

  std::string to_string() const;

 private:
  Section &section(std::string_view name);
  std::vector<Section> sections_;
};

/// Typed accessors; each throws ConfigError naming the section and key.
double get_double(const KeyValueConfig::Section &s, const std::string &key);
double get_double_or(const KeyValueConfig::Section *s, const std::string &key,
                     double fallback);
long long get_int_or(const KeyValueConfig::Section *s, const std::string &key,
                     long long fallback);
std::vector<double> get_doubles(const KeyValueConfig::Section &s,
                                const std::string &key, std::size_t expected);
std::string get_string_or(const KeyValueConfig::Section *s, const std::string &key,
                          std::string fallback);

}  // namespace ross
