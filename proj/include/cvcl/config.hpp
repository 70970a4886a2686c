// Copyright 2026 The cvcl Authors
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

#pragma once

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cvcl/common.hpp"

namespace cvcl {

/// Flat key=value run configuration. One `key = value` pair per line,
/// '#' starts a comment, keys are namespaced with dots. Values stay strings
/// until a schema resolves them.
class RunConfig {
 public:
  static RunConfig parse_string(const std::string& text) {
    RunConfig c;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const std::string trimmed = trim(line);
      if (trimmed.empty()) continue;
      const auto eq = trimmed.find('=');
      if (eq == std::string::npos)
        throw config_error("config line " + std::to_string(lineno) +
                           ": expected key = value");
      const std::string key = trim(trimmed.substr(0, eq));
      const std::string value = trim(trimmed.substr(eq + 1));
      if (key.empty())
        throw config_error("config line " + std::to_string(lineno) + ": empty key");
      if (c.kv_.count(key))
        throw config_error("config: duplicate key '" + key + "'");
      c.kv_[key] = value;
    }
    return c;
  }

  static RunConfig parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("config: cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str());
  }

  void set(const std::string& key, const std::string& value) { kv_[key] = value; }
  bool has(const std::string& key) const { return kv_.count(key) > 0; }
  const std::map<std::string, std::string>& entries() const { return kv_; }

 private:
  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
  }

  std::map<std::string, std::string> kv_;
};

/// Typed view of a RunConfig after schema validation.
class ResolvedConfig {
 public:
  double real(const std::string& key) const { return reals_.at(key); }
  long integer(const std::string& key) const { return ints_.at(key); }
  const std::string& str(const std::string& key) const { return strings_.at(key); }

  const std::map<std::string, std::string>& raw() const { return raw_; }

 private:
  friend class ConfigSchema;
  std::map<std::string, double> reals_;
  std::map<std::string, long> ints_;
  std::map<std::string, std::string> strings_;
  std::map<std::string, std::string> raw_;  // resolved values incl. defaults
};

/// Declares the keys a subcommand accepts. Unknown keys are rejected and
/// every value is type-checked before any computation runs.
class ConfigSchema {
 public:
  enum class Type { real, integer, string };

  ConfigSchema& require(const std::string& key, Type t) {
    fields_.push_back({key, t, false, "", {}});
    return *this;
  }
  ConfigSchema& optional(const std::string& key, Type t, const std::string& def) {
    fields_.push_back({key, t, true, def, {}});
    return *this;
  }
  /// String key restricted to a fixed set of values.
  ConfigSchema& choice(const std::string& key, std::vector<std::string> allowed,
                       std::optional<std::string> def = std::nullopt) {
    fields_.push_back({key, Type::string, def.has_value(), def.value_or(""),
                       std::move(allowed)});
    return *this;
  }

  ResolvedConfig resolve(const RunConfig& cfg) const {
    std::set<std::string> known;
    for (const auto& f : fields_) known.insert(f.key);
    for (const auto& [k, v] : cfg.entries())
      if (!known.count(k)) throw config_error("config: unknown key '" + k + "'");

    ResolvedConfig out;
    for (const auto& f : fields_) {
      std::string value;
      if (cfg.has(f.key)) {
        value = cfg.entries().at(f.key);
      } else if (f.has_default) {
        value = f.default_value;
      } else {
        throw config_error("config: missing required key '" + f.key + "'");
      }
      if (!f.allowed.empty()) {
        bool ok = false;
        for (const auto& a : f.allowed) ok = ok || a == value;
        if (!ok)
          throw config_error("config: key '" + f.key + "' has unsupported value '" +
                             value + "'");
      }
      switch (f.type) {
        case Type::real:
          out.reals_[f.key] = parse_real(f.key, value);
          break;
        case Type::integer:
          out.ints_[f.key] = parse_int(f.key, value);
          break;
        case Type::string:
          out.strings_[f.key] = value;
          break;
      }
      out.raw_[f.key] = value;
    }
    return out;
  }

 private:
  struct Field {
    std::string key;
    Type type;
    bool has_default;
    std::string default_value;
    std::vector<std::string> allowed;
  };

  static double parse_real(const std::string& key, const std::string& v) {
    errno = 0;
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (errno != 0 || end == v.c_str() || *end != '\0')
      throw config_error("config: key '" + key + "' is not a real number: '" + v + "'");
    return x;
  }
  static long parse_int(const std::string& key, const std::string& v) {
    errno = 0;
    char* end = nullptr;
    const long x = std::strtol(v.c_str(), &end, 10);
    if (errno != 0 || end == v.c_str() || *end != '\0')
      throw config_error("config: key '" + key + "' is not an integer: '" + v + "'");
    return x;
  }

  std::vector<Field> fields_;
};

}  // namespace cvcl
