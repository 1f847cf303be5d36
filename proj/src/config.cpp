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

#include "ross/config.hpp"

#include <cmath>
#include <sstream>

#include "ross/errors.hpp"
#include "ross/io.hpp"

namespace ross {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string where(const KeyValueConfig::Section &s, const std::string &key) {
  return "[" + s.name + "] " + key;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::string_view text) {
  KeyValueConfig cfg;
  std::string current;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw ConfigError("config line " + std::to_string(line_no) +
                          ": malformed section header");
      }
      current = std::string(trim(line.substr(1, line.size() - 2)));
      if (cfg.find(current)) {
        throw ConfigError("config line " + std::to_string(line_no) +
                          ": duplicate section [" + current + "]");
      }
      cfg.section(current);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected `key = value`");
    }
    const std::string key(trim(line.substr(0, eq)));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    }
    auto &sec = cfg.section(current);
    if (!sec.values.emplace(key, std::string(trim(line.substr(eq + 1)))).second) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": duplicate key '" + key + "'");
    }
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path &path) {
  if (!std::filesystem::exists(path)) {
    throw ConfigError("config file not found: " + path.string());
  }
  const auto bytes = io::read_file(path);
  return parse(std::string_view(reinterpret_cast<const char *>(bytes.data()),
                                bytes.size()));
}

const KeyValueConfig::Section *KeyValueConfig::find(std::string_view name) const {
  for (const auto &s : sections_) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

std::vector<const KeyValueConfig::Section *> KeyValueConfig::with_prefix(
    std::string_view prefix) const {
  std::vector<const Section *> out;
  for (const auto &s : sections_) {
    if (s.name == prefix ||
        (s.name.size() > prefix.size() && s.name.compare(0, prefix.size(), prefix) == 0 &&
         s.name[prefix.size()] == '.')) {
      out.push_back(&s);
    }
  }
  return out;
}

std::optional<std::string> KeyValueConfig::get(std::string_view section,
                                                std::string_view key) const {
  const Section *s = find(section);
  if (!s) return std::nullopt;
  const auto it = s->values.find(std::string(key));
  if (it == s->values.end()) return std::nullopt;
  return it->second;
}

void KeyValueConfig::set(std::string_view section, std::string_view key,
                         std::string value) {
  this->section(section).values[std::string(key)] = std::move(value);
}

KeyValueConfig::Section &KeyValueConfig::section(std::string_view name) {
  for (auto &s : sections_) {
    if (s.name == name) return s;
  }
  sections_.push_back({std::string(name), {}});
  return sections_.back();
}

std::string KeyValueConfig::to_string() const {
  std::string out;
  for (const auto &s : sections_) {
    if (!s.name.empty()) out += "[" + s.name + "]\n";
    for (const auto &[k, v] : s.values) out += k + " = " + v + "\n";
    out += "\n";
  }
  return out;
}

double get_double(const KeyValueConfig::Section &s, const std::string &key) {
  const auto it = s.values.find(key);
  if (it == s.values.end()) throw ConfigError("missing " + where(s, key));
  const auto v = io::parse_double(it->second);
  if (!v || !std::isfinite(*v)) {
    throw ConfigError(where(s, key) + " is not a finite number");
  }
  return *v;
}

double get_double_or(const KeyValueConfig::Section *s, const std::string &key,
                     double fallback) {
  if (!s || !s->values.count(key)) return fallback;
  return get_double(*s, key);
}

long long get_int_or(const KeyValueConfig::Section *s, const std::string &key,
                     long long fallback) {
  if (!s) return fallback;
  const auto it = s->values.find(key);
  if (it == s->values.end()) return fallback;
  const auto v = io::parse_int(it->second);
  if (!v) throw ConfigError(where(*s, key) + " is not an integer");
  return *v;
}

std::vector<double> get_doubles(const KeyValueConfig::Section &s,
                                const std::string &key, std::size_t expected) {
  const auto it = s.values.find(key);
  if (it == s.values.end()) throw ConfigError("missing " + where(s, key));
  std::istringstream in(it->second);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) {
    const auto v = io::parse_double(tok);
    if (!v || !std::isfinite(*v)) {
      throw ConfigError(where(s, key) + ": bad number '" + tok + "'");
    }
    out.push_back(*v);
  }
  if (out.size() != expected) {
    throw ConfigError(where(s, key) + ": expected " + std::to_string(expected) +
                      " numbers, got " + std::to_string(out.size()));
  }
  return out;
}

std::string get_string_or(const KeyValueConfig::Section *s, const std::string &key,
                          std::string fallback) {
  if (!s) return fallback;
  const auto it = s->values.find(key);
  return it == s->values.end() ? fallback : it->second;
}

}  // namespace ross
