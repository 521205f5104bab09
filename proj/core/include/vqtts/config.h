// Copyright 2026 The vqtts-kit Authors
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

#ifndef VQTTS_CONFIG_H_
#define VQTTS_CONFIG_H_

#include <cstdint>
#include <map>
#include <string>

namespace vqtts {
namespace config {

// Flat key/value configuration parsed from a TOML-like text file:
// `[section]` headers prefix subsequent keys as "section.key", values are
// bare tokens or double-quoted strings, `#` starts a comment.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text);

  bool has(const std::string& key) const;
  void set(const std::string& key, const std::string& value);

  std::string get_string(const std::string& key,
                         const std::string& fallback) const;
  // Throws when the key is absent.
  std::string require_string(const std::string& key) const;

  int64_t get_int(const std::string& key, int64_t fallback) const;
  double get_double(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace config
}  // namespace vqtts

#endif  // VQTTS_CONFIG_H_
