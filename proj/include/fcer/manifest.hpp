/*
 * Copyright 2026 The FCER Toolkit Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace fcer {

inline constexpr std::string_view kManifestName = "manifest.json";

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

struct InputDigest {
  std::string path;  // relative to the input root
  std::string sha256;
};

struct InputSet {
  std::string role;  // "dataset", "sweep", "checkpoint", ...
  std::filesystem::path root;
  std::vector<InputDigest> files;
};

/// Digests every regular file below `root` (or `root` itself if it is a
/// file), sorted by relative path.
InputSet digest_inputs(std::string role, const std::filesystem::path& root, std::string_view extension = {});

struct RunManifest {
  std::string command;
  nlohmann::ordered_json config;
  std::vector<InputSet> inputs;
  std::string tool_version;
  std::string timestamp;
};

/// UTC ISO-8601; SOURCE_DATE_EPOCH overrides the clock when set.
std::string utc_timestamp();

nlohmann::ordered_json to_json(const RunManifest& manifest);

/// Creates `dir` if needed. Throws ValidationError when it already holds a
/// manifest and `force` is false.
void prepare_output_dir(const std::filesystem::path& dir, bool force);
void write_manifest(const std::filesystem::path& dir, const RunManifest& manifest);

}  // namespace fcer
