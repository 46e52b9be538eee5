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

#include "fcer/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <map>

#include "fcer/npy.hpp"

namespace fcer {

namespace fs = std::filesystem;

namespace {

std::optional<int> parse_int(const std::string& s) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<std::size_t> member_index(const std::string& filename) {
  constexpr std::string_view prefix = "member_";
  constexpr std::string_view suffix = ".npy";
  if (filename.size() <= prefix.size() + suffix.size()) return std::nullopt;
  if (filename.compare(0, prefix.size(), prefix) != 0) return std::nullopt;
  if (filename.compare(filename.size() - suffix.size(), suffix.size(), suffix) != 0) {
    return std::nullopt;
  }
  const auto idx = parse_int(filename.substr(prefix.size(), filename.size() - prefix.size() - suffix.size()));
  if (!idx || *idx < 0) return std::nullopt;
  return static_cast<std::size_t>(*idx);
}

FireEvent load_event(const fs::path& dir, int year, const LoadOptions& options) {
  FireEvent event;
  event.id = dir.filename().string();
  event.year = year;
  if (!fs::exists(dir / "gt.npy")) throw ValidationError(dir.string() + ": missing gt.npy");
  event.gt = npy::load_mask(dir / "gt.npy");

  std::map<std::size_t, fs::path> members;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (const auto k = member_index(entry.path().filename().string())) members[*k] = entry.path();
  }
  std::size_t expected = 0;
  for (const auto& [k, path] : members) {
    if (k != expected) {
      throw ValidationError(dir.string() + ": member files must be numbered 0..n-1 (missing member_" +
                            std::to_string(expected) + ".npy)");
    }
    event.members.push_back(npy::load_probability(path));
    ++expected;
  }
  if (event.members.size() < options.min_members) {
    throw ValidationError(dir.string() + ": expected at least " + std::to_string(options.min_members) +
                          " member maps, found " + std::to_string(event.members.size()));
  }
  if (options.load_features && fs::exists(dir / "features.npy")) {
    event.features = npy::load_features(dir / "features.npy");
  }
  if (options.load_student && fs::exists(dir / "student_unc.npy")) {
    event.student_uncertainty = npy::load_uncertainty(dir / "student_unc.npy");
  }

  // Shapes must agree before cropping, otherwise the windows would not align.
  event.validate();
  if (options.crop) {
    event.gt = center_crop(event.gt, options.crop_size);
    for (auto& m : event.members) m = center_crop(m, options.crop_size);
    if (event.features) event.features = center_crop(*event.features, options.crop_size);
    if (event.student_uncertainty) {
      event.student_uncertainty = center_crop(*event.student_uncertainty, options.crop_size);
    }
  }
  return event;
}

}  // namespace

void FireEvent::validate() const {
  validate_mask(gt, id + "/gt");
  for (std::size_t k = 0; k < members.size(); ++k) {
    const std::string name = id + "/member_" + std::to_string(k);
    require_same_shape(gt, members[k], name.c_str());
    validate_probability(members[k], name);
  }
  if (student_uncertainty) {
    require_same_shape(gt, *student_uncertainty, (id + "/student_unc").c_str());
    validate_uncertainty(*student_uncertainty, id + "/student_unc");
  }
  if (features) {
    if (features->height != height() || features->width != width()) {
      throw ShapeError(id + "/features: spatial shape does not match gt");
    }
    validate_features(*features, id + "/features");
  }
}

std::vector<FireEvent> load_dataset(const fs::path& root, const LoadOptions& options) {
  if (!fs::is_directory(root)) throw ValidationError("dataset root is not a directory: " + root.string());
  std::vector<FireEvent> events;
  for (const auto& year_entry : fs::directory_iterator(root)) {
    if (!year_entry.is_directory()) continue;
    const auto year = parse_int(year_entry.path().filename().string());
    if (!year) continue;
    for (const auto& fire_entry : fs::directory_iterator(year_entry.path())) {
      if (!fire_entry.is_directory()) continue;
      events.push_back(load_event(fire_entry.path(), *year, options));
    }
  }
  std::sort(events.begin(), events.end(), [](const FireEvent& a, const FireEvent& b) {
    return a.year != b.year ? a.year < b.year : a.id < b.id;
  });
  return events;
}

fs::path event_dir(const fs::path& root, const FireEvent& event) {
  return root / std::to_string(event.year) / event.id;
}

void save_event(const FireEvent& event, const fs::path& root) {
  const fs::path dir = event_dir(root, event);
  fs::create_directories(dir);
  npy::save_grid(event.gt, dir / "gt.npy");
  for (std::size_t k = 0; k < event.members.size(); ++k) {
    npy::save_grid(event.members[k], dir / ("member_" + std::to_string(k) + ".npy"));
  }
  if (event.features) npy::save_features(*event.features, dir / "features.npy");
  if (event.student_uncertainty) npy::save_grid(*event.student_uncertainty, dir / "student_unc.npy");
}

}  // namespace fcer
