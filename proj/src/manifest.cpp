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

#include "fcer/manifest.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <memory>

#include <openssl/evp.h>

#include "fcer/error.hpp"
#include "fcer/report.hpp"

namespace fcer {

namespace {

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new(), &EVP_MD_CTX_free) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1) throw Error("sha256: init failed");
  }
  void update(const void* data, std::size_t n) {
    if (EVP_DigestUpdate(ctx_.get(), data, n) != 1) throw Error("sha256: update failed");
  }
  std::string hex() {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx_.get(), md.data(), &len) != 1) throw Error("sha256: final failed");
    std::string out;
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
      std::snprintf(buf, sizeof buf, "%02x", md[i]);
      out += buf;
    }
    return out;
  }

 private:
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx_;
};

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  Sha256 h;
  h.update(bytes.data(), bytes.size());
  return h.hex();
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  Sha256 h;
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    h.update(buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  return h.hex();
}

InputSet digest_inputs(std::string role, const std::filesystem::path& root, std::string_view extension) {
  namespace fs = std::filesystem;
  InputSet set;
  set.role = std::move(role);
  set.root = root;
  if (fs::is_regular_file(root)) {
    set.files.push_back({root.filename().string(), sha256_file(root)});
    return set;
  }
  if (!fs::is_directory(root)) throw ValidationError("no such input: " + root.string());
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    if (!extension.empty() && entry.path().extension() != extension) continue;
    if (entry.path().filename() == kManifestName) continue;
    set.files.push_back({fs::relative(entry.path(), root).generic_string(), sha256_file(entry.path())});
  }
  std::sort(set.files.begin(), set.files.end(),
            [](const InputDigest& a, const InputDigest& b) { return a.path < b.path; });
  return set;
}

std::string utc_timestamp() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch && *epoch) {
    char* end = nullptr;
    const long long v = std::strtoll(epoch, &end, 10);
    if (*end == '\0') t = static_cast<std::time_t>(v);
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::ordered_json to_json(const RunManifest& manifest) {
  nlohmann::ordered_json j;
  j["command"] = manifest.command;
  j["config"] = manifest.config;
  auto inputs = nlohmann::ordered_json::array();
  for (const auto& set : manifest.inputs) {
    nlohmann::ordered_json s;
    s["role"] = set.role;
    s["root"] = set.root.generic_string();
    auto files = nlohmann::ordered_json::array();
    for (const auto& f : set.files) files.push_back({{"path", f.path}, {"sha256", f.sha256}});
    s["files"] = files;
    inputs.push_back(s);
  }
  j["inputs"] = inputs;
  j["tool_version"] = manifest.tool_version;
  j["timestamp"] = manifest.timestamp;
  return j;
}

void prepare_output_dir(const std::filesystem::path& dir, bool force) {
  namespace fs = std::filesystem;
  if (fs::exists(dir / kManifestName) && !force) {
    throw ValidationError(dir.string() + " already holds a run manifest; pass --force to overwrite");
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ValidationError("cannot create " + dir.string() + ": " + ec.message());
}

void write_manifest(const std::filesystem::path& dir, const RunManifest& manifest) {
  write_text(dir / kManifestName, to_json(manifest).dump(2) + "\n");
}

}  // namespace fcer
