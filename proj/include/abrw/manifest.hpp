/**
 * Copyright 2026 The ABRW Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace abrw {

inline constexpr std::string_view kToolkitVersion = "1.0.0";

/// Resolved configuration of one command run, as ordered `key = value`
/// lines. The same file is accepted back through `--config`, so a manifest
/// replays its run; keys that are not options (digests, version) are ignored
/// on the way in.
class RunManifest {
 public:
  void set(std::string key, std::string value);
  std::optional<std::string> get(std::string_view key) const;
  const std::vector<std::pair<std::string, std::string>>& entries() const noexcept { return entries_; }

  void write(std::ostream& out) const;
  static RunManifest read(std::istream& in);

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

}  // namespace abrw
